use anyhow::Context;
use std::path::{Path, PathBuf};
use turnkit::corpus::{list_files, load_episode};
use turnkit::model::Episode;

/// Loads every `.json` episode in a directory, sorted by file name.
/// `summary.json` is the recover command's report, not an episode.
pub fn load_corpus(dir: &Path) -> anyhow::Result<Vec<(PathBuf, Episode)>> {
    let files = list_files(dir, "json").with_context(|| format!("reading {}", dir.display()))?;
    let mut corpus = Vec::with_capacity(files.len());
    for path in files {
        if path.file_name().is_some_and(|f| f == "summary.json") {
            continue;
        }
        let episode = load_episode(&path)?;
        corpus.push((path, episode));
    }
    Ok(corpus)
}

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Distinct series names in first-seen order of the sorted corpus.
pub fn series_names(corpus: &[(PathBuf, Episode)]) -> Vec<String> {
    let mut names: Vec<String> = corpus.iter().map(|(_, e)| e.series.clone()).collect();
    names.sort();
    names.dedup();
    names
}

pub fn fmt_f64(value: f64) -> String {
    format!("{value:.6}")
}

/// `HH:MM:SS` rendering of a duration in seconds.
pub fn fmt_hms(seconds: f64) -> String {
    let total = seconds.round() as u64;
    format!(
        "{:02}:{:02}:{:02}",
        total / 3600,
        total / 60 % 60,
        total % 60
    )
}
