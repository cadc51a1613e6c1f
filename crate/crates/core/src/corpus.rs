//! Episode files on disk: loading with validation, saving, `SxxEyy`
//! pairing with subtitle files, and the corpus-level recovery runner.

use crate::cipher::DEFAULT_DIGITS;
use crate::exec::par_map;
use crate::model::{validate_episode, Episode, ValidationReport};
use crate::recover::{recover_episode, subtitle_stream, RecoveryStats};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid episode JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: episode violates {} structural rule(s), first: {}", report.violations.len(), report.violations[0])]
    Invalid {
        path: PathBuf,
        report: ValidationReport,
    },
    #[error("duplicate episode key {key} ({a} and {b}); use an explicit manifest")]
    AmbiguousKey { key: String, a: PathBuf, b: PathBuf },
    #[error("{path}: manifest entry references missing file {missing}")]
    ManifestMissing { path: PathBuf, missing: PathBuf },
}

/// Extracts `(season, episode)` from an `SxxEyy` fragment of a file name,
/// case-insensitively.
pub fn parse_episode_key(name: &str) -> Option<(u32, u32)> {
    let bytes = name.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].eq_ignore_ascii_case(&b's') {
            let season_start = i + 1;
            let mut j = season_start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > season_start && j < bytes.len() && bytes[j].eq_ignore_ascii_case(&b'e') {
                let episode_start = j + 1;
                let mut k = episode_start;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k > episode_start {
                    let season = name[season_start..j].parse().ok()?;
                    let episode = name[episode_start..k].parse().ok()?;
                    return Some((season, episode));
                }
            }
        }
        i += 1;
    }
    None
}

/// Loads and structurally validates one episode file.
pub fn load_episode(path: &Path) -> Result<Episode, CorpusError> {
    let bytes = std::fs::read(path).map_err(|source| CorpusError::Io {
        path: path.into(),
        source,
    })?;
    let episode: Episode = serde_json::from_slice(&bytes).map_err(|source| CorpusError::Json {
        path: path.into(),
        source,
    })?;
    let report = validate_episode(&episode);
    if !report.is_clean() {
        return Err(CorpusError::Invalid {
            path: path.into(),
            report,
        });
    }
    Ok(episode)
}

/// Writes an episode as pretty-printed JSON with a trailing newline.
pub fn save_episode(path: &Path, episode: &Episode) -> Result<(), CorpusError> {
    let mut json = serde_json::to_string_pretty(episode).map_err(|source| CorpusError::Json {
        path: path.into(),
        source,
    })?;
    json.push('\n');
    std::fs::write(path, json).map_err(|source| CorpusError::Io {
        path: path.into(),
        source,
    })
}

/// Files with the given extension, sorted by name for determinism.
pub fn list_files(dir: &Path, extension: &str) -> Result<Vec<PathBuf>, CorpusError> {
    let entries = std::fs::read_dir(dir).map_err(|source| CorpusError::Io {
        path: dir.into(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.extension()
                .is_some_and(|e| e.eq_ignore_ascii_case(extension))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Explicit episode-to-subtitle pairing, overriding the naming convention.
#[derive(Clone, Debug, Deserialize)]
pub struct ManifestEntry {
    pub episode: String,
    pub subtitles: String,
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>, CorpusError> {
    let bytes = std::fs::read(path).map_err(|source| CorpusError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|source| CorpusError::Json {
        path: path.into(),
        source,
    })
}

/// Outcome of pairing episode files with subtitle files.
#[derive(Clone, Debug, Default)]
pub struct Pairing {
    pub pairs: Vec<(PathBuf, PathBuf)>,
    pub unmatched: Vec<PathBuf>,
}

/// Pairs episode files with subtitle files by their `SxxEyy` names, or by
/// an explicit manifest when provided. Episodes without a partner land in
/// `unmatched`.
pub fn pair_files(
    episodes: &[PathBuf],
    subtitles: &[PathBuf],
    manifest: Option<(&Path, &[ManifestEntry])>,
) -> Result<Pairing, CorpusError> {
    let mut pairing = Pairing::default();

    if let Some((manifest_path, entries)) = manifest {
        let by_name = |paths: &[PathBuf], name: &str| -> Option<PathBuf> {
            paths
                .iter()
                .find(|p| p.file_name().is_some_and(|f| f == name))
                .cloned()
        };
        let mut mapped: std::collections::BTreeMap<PathBuf, PathBuf> = Default::default();
        for entry in entries {
            let episode =
                by_name(episodes, &entry.episode).ok_or_else(|| CorpusError::ManifestMissing {
                    path: manifest_path.into(),
                    missing: PathBuf::from(&entry.episode),
                })?;
            let subtitle = by_name(subtitles, &entry.subtitles).ok_or_else(|| {
                CorpusError::ManifestMissing {
                    path: manifest_path.into(),
                    missing: PathBuf::from(&entry.subtitles),
                }
            })?;
            mapped.insert(episode, subtitle);
        }
        for episode in episodes {
            match mapped.get(episode) {
                Some(subtitle) => pairing.pairs.push((episode.clone(), subtitle.clone())),
                None => pairing.unmatched.push(episode.clone()),
            }
        }
        return Ok(pairing);
    }

    let mut srt_by_key: std::collections::BTreeMap<(u32, u32), PathBuf> = Default::default();
    for subtitle in subtitles {
        let name = subtitle
            .file_name()
            .and_then(|f| f.to_str())
            .unwrap_or_default();
        if let Some(key) = parse_episode_key(name) {
            if let Some(previous) = srt_by_key.insert(key, subtitle.clone()) {
                return Err(CorpusError::AmbiguousKey {
                    key: format!("S{:02}E{:02}", key.0, key.1),
                    a: previous,
                    b: subtitle.clone(),
                });
            }
        }
    }
    let mut seen: std::collections::BTreeMap<(u32, u32), PathBuf> = Default::default();
    for episode in episodes {
        let name = episode
            .file_name()
            .and_then(|f| f.to_str())
            .unwrap_or_default();
        match parse_episode_key(name) {
            Some(key) => {
                if let Some(previous) = seen.insert(key, episode.clone()) {
                    return Err(CorpusError::AmbiguousKey {
                        key: format!("S{:02}E{:02}", key.0, key.1),
                        a: previous,
                        b: episode.clone(),
                    });
                }
                match srt_by_key.get(&key) {
                    Some(subtitle) => pairing.pairs.push((episode.clone(), subtitle.clone())),
                    None => pairing.unmatched.push(episode.clone()),
                }
            }
            None => pairing.unmatched.push(episode.clone()),
        }
    }
    Ok(pairing)
}

/// One recovery work item: an encrypted episode, its subtitle file, and
/// where the recovered episode goes.
#[derive(Clone, Debug)]
pub struct RecoverJob {
    pub episode: PathBuf,
    pub subtitles: PathBuf,
    pub output: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpisodeOutcome {
    pub episode: String,
    pub key: String,
    pub stats: RecoveryStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedEpisode {
    pub episode: String,
    pub reason: String,
}

/// Corpus recovery result. `elapsed` is measured wall-clock and reported on
/// the console only, never written into output files, so runs stay
/// byte-reproducible.
#[derive(Debug)]
pub struct RecoverSummary {
    pub completed: Vec<EpisodeOutcome>,
    pub skipped: Vec<SkippedEpisode>,
    pub elapsed: Duration,
}

fn run_one(job: &RecoverJob, fallback_digits: usize) -> Result<EpisodeOutcome, String> {
    let episode = load_episode(&job.episode).map_err(|e| e.to_string())?;
    let digits = episode.digits.map(usize::from).unwrap_or(fallback_digits);
    let srt_bytes =
        std::fs::read(&job.subtitles).map_err(|e| format!("{}: {e}", job.subtitles.display()))?;
    let stream = subtitle_stream(&srt_bytes, digits).map_err(|e| e.to_string())?;
    let (recovered, stats) = recover_episode(&episode, &stream).map_err(|e| e.to_string())?;
    save_episode(&job.output, &recovered).map_err(|e| e.to_string())?;
    Ok(EpisodeOutcome {
        episode: job
            .episode
            .file_name()
            .and_then(|f| f.to_str())
            .unwrap_or_default()
            .to_string(),
        key: episode.key(),
        stats,
    })
}

/// Recovers a batch of episodes, one work item per episode, in parallel
/// when available. Failed items are reported as skipped, not fatal.
pub fn recover_corpus(jobs: &[RecoverJob], fallback_digits: usize) -> RecoverSummary {
    let started = Instant::now();
    let results = par_map(jobs, |job| run_one(job, fallback_digits));
    let mut summary = RecoverSummary {
        completed: Vec::new(),
        skipped: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (job, result) in jobs.iter().zip(results) {
        match result {
            Ok(outcome) => summary.completed.push(outcome),
            Err(reason) => summary.skipped.push(SkippedEpisode {
                episode: job
                    .episode
                    .file_name()
                    .and_then(|f| f.to_str())
                    .unwrap_or_default()
                    .to_string(),
                reason,
            }),
        }
    }
    summary.elapsed = started.elapsed();
    summary
}

/// Default digits to assume for encrypted files that lack the field.
pub fn default_digits() -> usize {
    DEFAULT_DIGITS
}
