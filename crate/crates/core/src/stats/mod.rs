//! Corpus statistics: speech coverage, duration distributions, speaker
//! concentration, season correlations, scene/shot summaries.

pub mod mtld;
pub mod network;
pub mod powerlaw;

use crate::model::Episode;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("episode duration is zero")]
    ZeroDuration,
    #[error("no samples")]
    Empty,
    #[error("samples must be positive and finite")]
    BadSample,
    #[error("need at least 2 seasons, got {0}")]
    TooFewSeasons(usize),
}

/// Fraction of the episode covered by speech. Turns are expected to be
/// non-overlapping (apply the cut-off rule first).
pub fn speech_coverage(episode: &Episode) -> Result<f64, StatsError> {
    if episode.duration.as_millis() == 0 {
        return Err(StatsError::ZeroDuration);
    }
    let speech: u64 = episode.turns.iter().map(|t| t.duration_ms()).sum();
    Ok(speech as f64 / episode.duration.as_millis() as f64)
}

/// Median (midpoint convention), mean and count of a duration sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DurationStats {
    pub median: f64,
    pub mean: f64,
    pub count: usize,
}

/// [`duration_stats`] over a turn list.
pub fn turn_duration_stats(
    turns: &[crate::model::SpeechTurn],
) -> Result<DurationStats, StatsError> {
    let durations: Vec<f64> = turns.iter().map(|t| t.duration_secs()).collect();
    duration_stats(&durations)
}

/// Summary statistics over durations in seconds.
pub fn duration_stats(durations: &[f64]) -> Result<DurationStats, StatsError> {
    if durations.is_empty() {
        return Err(StatsError::Empty);
    }
    if durations.iter().any(|d| !d.is_finite()) {
        return Err(StatsError::BadSample);
    }
    let mut sorted = durations.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(DurationStats {
        median,
        mean: sorted.iter().sum::<f64>() / n as f64,
        count: n,
    })
}

/// Complementary cumulative distribution: sorted distinct `x` with
/// `P(X >= x)`. Starts at 1 and never increases.
pub fn ccdf(samples: &[f64]) -> Result<Vec<(f64, f64)>, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty);
    }
    if samples.iter().any(|&x| !x.is_finite() || x <= 0.0) {
        return Err(StatsError::BadSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        points.push((x, (n - i) as f64 / n as f64));
        while i < n && sorted[i] == x {
            i += 1;
        }
    }
    Ok(points)
}

/// A speaker's accumulated speaking time over a corpus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeakerProfile {
    pub speaker: String,
    /// Seconds of speech.
    pub speaking_time: f64,
    pub turn_count: usize,
    /// Fraction of total speech time; shares sum to 1 over the corpus.
    pub share: f64,
}

/// Speaking time per speaker, sorted by time descending (label ascending on
/// ties so the order is stable).
pub fn speaker_profiles(episodes: &[Episode]) -> Vec<SpeakerProfile> {
    let mut time_ms: BTreeMap<&str, u64> = BTreeMap::new();
    let mut turns: BTreeMap<&str, usize> = BTreeMap::new();
    for episode in episodes {
        for turn in &episode.turns {
            *time_ms.entry(&turn.speaker).or_insert(0) += turn.duration_ms();
            *turns.entry(&turn.speaker).or_insert(0) += 1;
        }
    }
    let total: u64 = time_ms.values().sum();
    let mut profiles: Vec<SpeakerProfile> = time_ms
        .iter()
        .map(|(&speaker, &ms)| SpeakerProfile {
            speaker: speaker.to_string(),
            speaking_time: ms as f64 / 1000.0,
            turn_count: turns[speaker],
            share: if total == 0 {
                0.0
            } else {
                ms as f64 / total as f64
            },
        })
        .collect();
    profiles.sort_by(|a, b| {
        b.speaking_time
            .partial_cmp(&a.speaking_time)
            .unwrap()
            .then_with(|| a.speaker.cmp(&b.speaker))
    });
    profiles
}

/// Combined share of the `k` most-speaking profiles.
pub fn top_k_share(profiles: &[SpeakerProfile], k: usize) -> f64 {
    profiles.iter().take(k).map(|p| p.share).sum()
}

/// Pearson correlation matrix between per-season relative speaking-time
/// distributions over the union of a series' speakers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeasonCorrelation {
    pub seasons: Vec<u32>,
    /// `matrix[i][j]` is `r` between seasons `i` and `j`; `None` when one
    /// side has zero variance (never silently coerced to 0).
    pub matrix: Vec<Vec<Option<f64>>>,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Correlates the speaker distributions of every pair of seasons.
pub fn season_correlation(episodes: &[Episode]) -> Result<SeasonCorrelation, StatsError> {
    let mut speakers: BTreeSet<&str> = BTreeSet::new();
    let mut per_season: BTreeMap<u32, BTreeMap<&str, u64>> = BTreeMap::new();
    for episode in episodes {
        let season = per_season.entry(episode.season).or_default();
        for turn in &episode.turns {
            speakers.insert(&turn.speaker);
            *season.entry(&turn.speaker).or_insert(0) += turn.duration_ms();
        }
    }
    if per_season.len() < 2 {
        return Err(StatsError::TooFewSeasons(per_season.len()));
    }

    let seasons: Vec<u32> = per_season.keys().copied().collect();
    let vectors: Vec<Vec<f64>> = per_season
        .values()
        .map(|times| {
            let total: u64 = times.values().sum();
            speakers
                .iter()
                .map(|s| {
                    if total == 0 {
                        0.0
                    } else {
                        times.get(s).copied().unwrap_or(0) as f64 / total as f64
                    }
                })
                .collect()
        })
        .collect();

    let k = seasons.len();
    let mut matrix = vec![vec![None; k]; k];
    for i in 0..k {
        matrix[i][i] = Some(1.0);
        for j in i + 1..k {
            let r = pearson(&vectors[i], &vectors[j]);
            matrix[i][j] = r;
            matrix[j][i] = r;
        }
    }
    Ok(SeasonCorrelation { seasons, matrix })
}

/// One 2-D histogram cell: scenes with this many speakers in this duration bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SceneHistogramCell {
    pub duration_lo: f64,
    pub duration_hi: f64,
    pub speakers: usize,
    pub count: usize,
}

/// Scene and shot layer summary. Fields are `None` when the corresponding
/// annotation layer is absent from the corpus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneShotStats {
    pub scene_count: usize,
    pub mean_scene_duration: Option<f64>,
    pub shot_count: usize,
    pub mean_shot_duration: Option<f64>,
    /// Labeled shots divided by the number of distinct recurring clusters.
    pub mean_cluster_occurrences: Option<f64>,
    pub mean_speakers_per_scene: Option<f64>,
    /// Data behind the speakers-per-scene vs duration density figure.
    pub histogram: Vec<SceneHistogramCell>,
}

/// Width of the scene-duration histogram bins, in seconds.
pub const SCENE_DURATION_BIN_SECS: f64 = 10.0;

/// Summarizes scene and shot layers; speakers are assigned to the scene
/// containing their turn's midpoint.
pub fn scene_shot_stats(episodes: &[Episode]) -> SceneShotStats {
    let mut scene_durations: Vec<f64> = Vec::new();
    let mut speakers_per_scene: Vec<(f64, usize)> = Vec::new(); // (duration, speakers)
    let mut shot_durations: Vec<f64> = Vec::new();
    let mut labeled_shots = 0usize;
    let mut clusters: BTreeSet<(u32, u32, u32)> = BTreeSet::new(); // per episode

    for episode in episodes {
        if let Some(scenes) = &episode.scenes {
            for scene in scenes {
                let speakers: BTreeSet<&str> = episode
                    .turns
                    .iter()
                    .filter(|t| {
                        let mid = t.midpoint();
                        scene.start <= mid && mid < scene.end
                    })
                    .map(|t| t.speaker.as_str())
                    .collect();
                scene_durations.push(scene.duration_secs());
                speakers_per_scene.push((scene.duration_secs(), speakers.len()));
            }
        }
        if let Some(shots) = &episode.shots {
            for shot in shots {
                shot_durations.push(shot.duration_secs());
                if let Some(label) = shot.recurring_cluster {
                    labeled_shots += 1;
                    clusters.insert((episode.season, episode.episode, label));
                }
            }
        }
    }

    let mean = |xs: &[f64]| -> Option<f64> {
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    };

    let mut cells: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(duration, speakers) in &speakers_per_scene {
        let bin = (duration / SCENE_DURATION_BIN_SECS).floor() as usize;
        *cells.entry((bin, speakers)).or_insert(0) += 1;
    }
    let histogram = cells
        .into_iter()
        .map(|((bin, speakers), count)| SceneHistogramCell {
            duration_lo: bin as f64 * SCENE_DURATION_BIN_SECS,
            duration_hi: (bin + 1) as f64 * SCENE_DURATION_BIN_SECS,
            speakers,
            count,
        })
        .collect();

    SceneShotStats {
        scene_count: scene_durations.len(),
        mean_scene_duration: mean(&scene_durations),
        shot_count: shot_durations.len(),
        mean_shot_duration: mean(&shot_durations),
        mean_cluster_occurrences: (!clusters.is_empty())
            .then(|| labeled_shots as f64 / clusters.len() as f64),
        mean_speakers_per_scene: (!speakers_per_scene.is_empty()).then(|| {
            speakers_per_scene
                .iter()
                .map(|&(_, s)| s as f64)
                .sum::<f64>()
                / speakers_per_scene.len() as f64
        }),
        histogram,
    }
}
