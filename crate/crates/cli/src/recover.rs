use crate::util::{ensure_dir, write_text};
use anyhow::Context;
use serde_json::json;
use std::path::Path;
use std::process::ExitCode;
use turnkit::corpus::{
    list_files, load_manifest, pair_files, recover_corpus, RecoverJob, SkippedEpisode,
};

/// Pairs encrypted episodes with subtitle files, recovers each, and writes
/// the recovered episodes plus a `summary.json` (timing goes to stderr so
/// outputs stay byte-reproducible).
pub fn run(
    input: &Path,
    subtitles: &Path,
    output: &Path,
    manifest_path: Option<&Path>,
    digits: usize,
) -> anyhow::Result<ExitCode> {
    let episodes =
        list_files(input, "json").with_context(|| format!("reading {}", input.display()))?;
    let srts =
        list_files(subtitles, "srt").with_context(|| format!("reading {}", subtitles.display()))?;

    let manifest = match manifest_path {
        Some(path) => Some((path, load_manifest(path)?)),
        None => None,
    };
    let pairing = pair_files(
        &episodes,
        &srts,
        manifest
            .as_ref()
            .map(|(p, entries)| (*p, entries.as_slice())),
    )?;

    ensure_dir(output)?;
    let jobs: Vec<RecoverJob> = pairing
        .pairs
        .iter()
        .map(|(episode, subtitle)| RecoverJob {
            episode: episode.clone(),
            subtitles: subtitle.clone(),
            output: output.join(episode.file_name().expect("episode files have names")),
        })
        .collect();

    let mut summary = recover_corpus(&jobs, digits);
    for unmatched in &pairing.unmatched {
        summary.skipped.push(SkippedEpisode {
            episode: unmatched
                .file_name()
                .and_then(|f| f.to_str())
                .unwrap_or_default()
                .to_string(),
            reason: "no matching subtitle file".to_string(),
        });
    }
    summary.skipped.sort_by(|a, b| a.episode.cmp(&b.episode));

    for outcome in &summary.completed {
        println!(
            "{}: {} tokens, {} plain, {} deleted, {} substituted, {} subtitle insertions dropped",
            outcome.episode,
            outcome.stats.tokens,
            outcome.stats.plain,
            outcome.stats.deleted,
            outcome.stats.substituted,
            outcome.stats.inserts_discarded,
        );
    }
    for skipped in &summary.skipped {
        println!("skipped {}: {}", skipped.episode, skipped.reason);
    }
    eprintln!(
        "recovered {} episode(s) in {:.2} s ({} skipped)",
        summary.completed.len(),
        summary.elapsed.as_secs_f64(),
        summary.skipped.len(),
    );

    let report = json!({
        "completed": summary.completed,
        "skipped": summary.skipped,
    });
    write_text(&output.join("summary.json"), &format!("{:#}\n", report))?;

    if summary.completed.is_empty() || !summary.skipped.is_empty() {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
