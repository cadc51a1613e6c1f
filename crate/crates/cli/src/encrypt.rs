use crate::util::{ensure_dir, load_corpus};
use anyhow::Context;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use turnkit::cipher::encrypt_episode;
use turnkit::corpus::save_episode;
use turnkit::exec::par_map;

/// Encrypts every episode in `input` into `output` with the same file
/// names. Any invalid or already-encrypted episode aborts the run and the
/// partial outputs are removed.
pub fn run(input: &Path, output: &Path, digits: usize) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(input)?;
    if corpus.is_empty() {
        anyhow::bail!("no episode files found in {}", input.display());
    }
    ensure_dir(output)?;

    let results: Vec<anyhow::Result<PathBuf>> = par_map(&corpus, |(path, episode)| {
        let encrypted = encrypt_episode(episode, digits)
            .with_context(|| format!("encrypting {}", path.display()))?;
        let target = output.join(path.file_name().expect("episode files have names"));
        save_episode(&target, &encrypted)?;
        Ok(target)
    });

    let mut written = Vec::new();
    let mut failure = None;
    for result in results {
        match result {
            Ok(path) => written.push(path),
            Err(err) => {
                failure = Some(err);
                break;
            }
        }
    }
    if let Some(err) = failure {
        for path in written {
            let _ = std::fs::remove_file(path);
        }
        return Err(err);
    }

    println!(
        "encrypted {} episode(s) with {} digit(s) into {}",
        written.len(),
        digits,
        output.display()
    );
    Ok(ExitCode::SUCCESS)
}
