//! `turnkit` — encrypt annotation corpora, recover their text from subtitle
//! files, score the recovery, and compute corpus statistics.
//!
//! Exit codes: 0 success, 1 invalid input, 2 partial completion (some
//! episodes skipped). Outputs are byte-reproducible for a given seed;
//! wall-clock timing goes to stderr only.

mod encrypt;
mod eval;
mod network;
mod recover;
mod stats;
mod util;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "turnkit", version, about, propagate_version = true)]
struct Cli {
    /// Hex digits kept per code (1-64).
    #[arg(long, global = true, default_value_t = 3, env = "TURNKIT_DIGITS")]
    digits: usize,
    /// Worker threads for per-episode work (0 = one per core).
    #[arg(long, global = true, default_value_t = 0, env = "TURNKIT_THREADS")]
    threads: usize,
    /// Seed for every randomized computation (bootstrap replicates).
    #[arg(long, global = true, default_value_t = 0, env = "TURNKIT_SEED")]
    seed: u64,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table, env = "TURNKIT_FORMAT")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt clear episode files for publication.
    Encrypt {
        /// Directory of clear episode JSON files.
        #[arg(long)]
        input: PathBuf,
        /// Directory the encrypted files are written to.
        #[arg(long)]
        output: PathBuf,
    },
    /// Recover clear text from encrypted episodes and subtitle files.
    Recover {
        /// Directory of encrypted episode JSON files.
        #[arg(long)]
        input: PathBuf,
        /// Directory of SRT files, paired by SxxEyy file names.
        #[arg(long)]
        subtitles: PathBuf,
        /// Directory the recovered files and summary.json are written to.
        #[arg(long)]
        output: PathBuf,
        /// Explicit pairing manifest (JSON array of {episode, subtitles}).
        #[arg(long, env = "TURNKIT_MANIFEST")]
        manifest: Option<PathBuf>,
    },
    /// Score recovered episodes against their clear references.
    Eval {
        /// Directory of clear reference episodes.
        #[arg(long)]
        reference: PathBuf,
        /// Directory of recovered episodes.
        #[arg(long)]
        recovered: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Corpus statistics: coverage, durations, power laws, lexical
    /// diversity, speaker concentration, scenes and shots.
    Stats {
        /// Directory of clear or recovered episode files.
        #[arg(long)]
        input: PathBuf,
        /// Directory the exports are written to.
        #[arg(long)]
        output: PathBuf,
        /// Bootstrap replicates for power-law goodness of fit (0 = skip).
        #[arg(long, default_value_t = 0)]
        bootstrap: usize,
    },
    /// Conversational network and centralities from addressee annotations.
    Network {
        /// Directory of episode files with addressee annotations.
        #[arg(long)]
        input: PathBuf,
        /// Directory the edge lists, centralities and GraphML go to.
        #[arg(long)]
        output: PathBuf,
        /// Betweenness over inverse-weight shortest paths instead of hops.
        #[arg(long)]
        weighted: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    turnkit::exec::init_thread_pool(cli.threads);
    match cli.command {
        Command::Encrypt { input, output } => encrypt::run(&input, &output, cli.digits),
        Command::Recover {
            input,
            subtitles,
            output,
            manifest,
        } => recover::run(&input, &subtitles, &output, manifest.as_deref(), cli.digits),
        Command::Eval {
            reference,
            recovered,
            output,
        } => eval::run(&reference, &recovered, output.as_deref(), cli.format),
        Command::Stats {
            input,
            output,
            bootstrap,
        } => stats::run(&input, &output, bootstrap, cli.seed, cli.format),
        Command::Network {
            input,
            output,
            weighted,
        } => network::run(&input, &output, weighted),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
