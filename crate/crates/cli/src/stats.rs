use crate::util::{ensure_dir, fmt_f64, fmt_hms, load_corpus, series_names, write_text};
use crate::OutputFormat;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::ExitCode;
use turnkit::model::{Episode, TokenKind};
use turnkit::recover::{parse_marker, Marked};
use turnkit::stats::mtld::{mtld_words, MTLD_DEFAULT_THRESHOLD};
use turnkit::stats::powerlaw::{fit_power_law, gof_bootstrap, PowerLawFit};
use turnkit::stats::{
    ccdf, duration_stats, scene_shot_stats, season_correlation, speaker_profiles, top_k_share,
};

/// Word texts of a series corpus, markers unwrapped (`<>` dropped,
/// `<word>` contributing `word`).
fn corpus_words(episodes: &[&Episode]) -> Vec<String> {
    let mut words = Vec::new();
    for episode in episodes {
        for turn in &episode.turns {
            for token in &turn.tokens {
                if token.kind != TokenKind::Word {
                    continue;
                }
                match parse_marker(&token.text) {
                    Marked::Deleted => {}
                    Marked::Substituted(w) | Marked::Plain(w) => words.push(w.to_string()),
                }
            }
        }
    }
    words
}

fn fitted(samples: &[f64], bootstrap: usize, seed: u64) -> Option<PowerLawFit> {
    let mut fit = fit_power_law(samples).ok()?;
    if bootstrap > 0 {
        if let Ok(gof) = gof_bootstrap(&fit, samples, bootstrap, seed) {
            fit.p_value = Some(gof.p_value);
        }
    }
    Some(fit)
}

pub fn run(
    input: &Path,
    output: &Path,
    bootstrap: usize,
    seed: u64,
    format: OutputFormat,
) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(input)?;
    if corpus.is_empty() {
        anyhow::bail!("no episode files found in {}", input.display());
    }
    if (1..100).contains(&bootstrap) {
        eprintln!(
            "warning: {bootstrap} bootstrap replicates give a coarse p-value; 1000 is typical"
        );
    }
    ensure_dir(output)?;

    let mut speech_csv = String::from(
        "series,season,episodes,video_duration,speech_duration,coverage,turns,speakers\n",
    );
    let mut durations_ccdf_csv = String::from("series,turn_duration_secs,p_at_least\n");
    let mut speaking_ccdf_csv = String::from("series,speaking_time_secs,p_at_least\n");
    let mut profiles_csv = String::from("series,speaker,speaking_time_secs,turns,share\n");
    let mut correlation_csv = String::from("series,season_a,season_b,pearson_r\n");
    let mut hist_csv = String::from("series,scene_duration_lo,scene_duration_hi,speakers,scenes\n");
    let mut powerlaw_json: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let mut stats_json: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let mut scene_shot_json: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let mut summary_rows: Vec<serde_json::Value> = Vec::new();

    for (series_index, series) in series_names(&corpus).iter().enumerate() {
        let episodes: Vec<&Episode> = corpus
            .iter()
            .filter(|(_, e)| e.series == *series)
            .map(|(_, e)| e)
            .collect();
        let owned: Vec<Episode> = episodes.iter().map(|e| (*e).clone()).collect();

        // Per-season speech rows.
        let mut seasons: BTreeMap<u32, Vec<&Episode>> = BTreeMap::new();
        for episode in &episodes {
            seasons.entry(episode.season).or_default().push(episode);
        }
        for (season, eps) in &seasons {
            let video_ms: u64 = eps.iter().map(|e| e.duration.as_millis()).sum();
            let speech_ms: u64 = eps
                .iter()
                .flat_map(|e| e.turns.iter())
                .map(|t| t.duration_ms())
                .sum();
            let turns: usize = eps.iter().map(|e| e.turns.len()).sum();
            let speakers: BTreeSet<&str> = eps
                .iter()
                .flat_map(|e| e.turns.iter())
                .map(|t| t.speaker.as_str())
                .collect();
            speech_csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                series,
                season,
                eps.len(),
                fmt_hms(video_ms as f64 / 1000.0),
                fmt_hms(speech_ms as f64 / 1000.0),
                fmt_f64(speech_ms as f64 / video_ms.max(1) as f64),
                turns,
                speakers.len(),
            ));
        }

        let turn_durations: Vec<f64> = episodes
            .iter()
            .flat_map(|e| e.turns.iter())
            .map(|t| t.duration_secs())
            .filter(|&d| d > 0.0)
            .collect();
        let profiles = speaker_profiles(&owned);
        let speaking_times: Vec<f64> = profiles
            .iter()
            .map(|p| p.speaking_time)
            .filter(|&s| s > 0.0)
            .collect();

        if let Ok(points) = ccdf(&turn_durations) {
            for (x, p) in points {
                durations_ccdf_csv.push_str(&format!("{},{},{}\n", series, fmt_f64(x), fmt_f64(p)));
            }
        }
        if let Ok(points) = ccdf(&speaking_times) {
            for (x, p) in points {
                speaking_ccdf_csv.push_str(&format!("{},{},{}\n", series, fmt_f64(x), fmt_f64(p)));
            }
        }
        for p in &profiles {
            profiles_csv.push_str(&format!(
                "{},{},{},{},{}\n",
                series,
                p.speaker,
                fmt_f64(p.speaking_time),
                p.turn_count,
                fmt_f64(p.share),
            ));
        }

        let base_seed = seed ^ ((series_index as u64) << 32);
        let duration_fit = fitted(&turn_durations, bootstrap, base_seed);
        let speaking_fit = fitted(&speaking_times, bootstrap, base_seed ^ 1);
        powerlaw_json.insert(
            series.clone(),
            json!({
                "turn_durations": duration_fit,
                "speaking_time": speaking_fit,
            }),
        );

        let encrypted = episodes.iter().any(|e| e.encrypted);
        let words = if encrypted {
            Vec::new()
        } else {
            corpus_words(&episodes)
        };
        let diversity = if words.is_empty() {
            None
        } else {
            mtld_words(&words, MTLD_DEFAULT_THRESHOLD).ok()
        };

        match season_correlation(&owned) {
            Ok(corr) => {
                for i in 0..corr.seasons.len() {
                    for j in i..corr.seasons.len() {
                        let cell = corr.matrix[i][j].map(fmt_f64).unwrap_or_default();
                        correlation_csv.push_str(&format!(
                            "{},{},{},{}\n",
                            series, corr.seasons[i], corr.seasons[j], cell
                        ));
                    }
                }
            }
            Err(_) => {
                // Single-season series: no pairs to correlate.
            }
        }

        let scenes = scene_shot_stats(&owned);
        for cell in &scenes.histogram {
            hist_csv.push_str(&format!(
                "{},{},{},{},{}\n",
                series,
                fmt_f64(cell.duration_lo),
                fmt_f64(cell.duration_hi),
                cell.speakers,
                cell.count,
            ));
        }
        let has_scene_layer = scenes.scene_count > 0 || scenes.shot_count > 0;
        scene_shot_json.insert(
            series.clone(),
            if has_scene_layer {
                json!(scenes)
            } else {
                serde_json::Value::Null
            },
        );

        let durations = duration_stats(&turn_durations).ok();
        let total_video_ms: u64 = episodes.iter().map(|e| e.duration.as_millis()).sum();
        let total_speech_ms: u64 = episodes
            .iter()
            .flat_map(|e| e.turns.iter())
            .map(|t| t.duration_ms())
            .sum();
        let speakers: BTreeSet<&str> = episodes
            .iter()
            .flat_map(|e| e.turns.iter())
            .map(|t| t.speaker.as_str())
            .collect();
        let coverage = total_speech_ms as f64 / total_video_ms.max(1) as f64;
        let turn_count: usize = episodes.iter().map(|e| e.turns.len()).sum();

        stats_json.insert(
            series.clone(),
            json!({
                "episodes": episodes.len(),
                "video_duration_secs": total_video_ms as f64 / 1000.0,
                "speech_duration_secs": total_speech_ms as f64 / 1000.0,
                "speech_coverage": coverage,
                "turns": turn_count,
                "speakers": speakers.len(),
                "median_turn_duration_secs": durations.map(|d| d.median),
                "mean_turn_duration_secs": durations.map(|d| d.mean),
                "top5_speaking_share": top_k_share(&profiles, 5),
                "mtld": diversity,
                "token_count": episodes.iter().map(|e| e.token_count()).sum::<usize>(),
            }),
        );
        summary_rows.push(json!({
            "series": series,
            "episodes": episodes.len(),
            "coverage_pct": coverage * 100.0,
            "turns": turn_count,
            "speakers": speakers.len(),
            "median_turn_secs": durations.map(|d| d.median),
            "mtld": diversity,
        }));
    }

    write_text(&output.join("speech.csv"), &speech_csv)?;
    write_text(&output.join("turn_durations_ccdf.csv"), &durations_ccdf_csv)?;
    write_text(&output.join("speaking_time_ccdf.csv"), &speaking_ccdf_csv)?;
    write_text(&output.join("speaker_profiles.csv"), &profiles_csv)?;
    write_text(&output.join("season_correlation.csv"), &correlation_csv)?;
    write_text(&output.join("speakers_per_scene_hist.csv"), &hist_csv)?;
    write_text(
        &output.join("powerlaw.json"),
        &format!("{:#}\n", json!(powerlaw_json)),
    )?;
    write_text(
        &output.join("scene_shots.json"),
        &format!("{:#}\n", json!(scene_shot_json)),
    )?;
    write_text(
        &output.join("stats.json"),
        &format!("{:#}\n", json!(stats_json)),
    )?;

    let na = || "n/a".to_string();
    match format {
        OutputFormat::Json => println!("{:#}", json!(summary_rows)),
        OutputFormat::Csv => {
            println!("series,episodes,coverage_pct,turns,speakers,median_turn_secs,mtld");
            for row in &summary_rows {
                println!(
                    "{},{},{:.1},{},{},{},{}",
                    row["series"].as_str().unwrap_or_default(),
                    row["episodes"],
                    row["coverage_pct"].as_f64().unwrap_or(0.0),
                    row["turns"],
                    row["speakers"],
                    row["median_turn_secs"]
                        .as_f64()
                        .map(|v| format!("{v:.2}"))
                        .unwrap_or_else(na),
                    row["mtld"]
                        .as_f64()
                        .map(|v| format!("{v:.1}"))
                        .unwrap_or_else(na),
                );
            }
        }
        OutputFormat::Table => {
            println!(
                "{:<12} {:>8} {:>12} {:>8} {:>9} {:>13} {:>8}",
                "series", "episodes", "coverage", "turns", "speakers", "median turn", "mtld"
            );
            for row in &summary_rows {
                println!(
                    "{:<12} {:>8} {:>11.1}% {:>8} {:>9} {:>11.2} s {:>8}",
                    row["series"].as_str().unwrap_or_default(),
                    row["episodes"].as_u64().unwrap_or(0),
                    row["coverage_pct"].as_f64().unwrap_or(0.0),
                    row["turns"].as_u64().unwrap_or(0),
                    row["speakers"].as_u64().unwrap_or(0),
                    row["median_turn_secs"].as_f64().unwrap_or(0.0),
                    row["mtld"]
                        .as_f64()
                        .map(|v| format!("{v:.1}"))
                        .unwrap_or_else(na),
                );
            }
        }
    }
    eprintln!("stats written to {}", output.display());
    Ok(ExitCode::SUCCESS)
}
