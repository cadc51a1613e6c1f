use crate::util::{load_corpus, write_text};
use crate::OutputFormat;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use turnkit::wer::{
    episode_report, render_error_csv, render_error_table, summarize_by_series, ErrorReport,
};

/// Compares recovered episodes against clear references, episode by
/// episode, and prints per-series averages shaped like the usual error
/// table: WER, SER, #tokens, Ins, Del, Sub.
pub fn run(
    reference_dir: &Path,
    recovered_dir: &Path,
    output: Option<&Path>,
    format: OutputFormat,
) -> anyhow::Result<ExitCode> {
    let reference = load_corpus(reference_dir)?;
    let recovered = load_corpus(recovered_dir)?;

    let mut rec_index: BTreeMap<(String, u32, u32), &turnkit::Episode> = BTreeMap::new();
    for (_, episode) in &recovered {
        rec_index.insert(
            (episode.series.clone(), episode.season, episode.episode),
            episode,
        );
    }

    let mut reports: Vec<(String, ErrorReport)> = Vec::new();
    let mut episode_rows = Vec::new();
    for (path, ref_episode) in &reference {
        let key = (
            ref_episode.series.clone(),
            ref_episode.season,
            ref_episode.episode,
        );
        let Some(rec_episode) = rec_index.remove(&key) else {
            anyhow::bail!(
                "recovered corpus is missing {} {} (from {})",
                ref_episode.series,
                ref_episode.key(),
                path.display()
            );
        };
        let report = episode_report(ref_episode, rec_episode)?;
        episode_rows.push(json!({
            "file": path.file_name().and_then(|f| f.to_str()),
            "series": ref_episode.series,
            "key": ref_episode.key(),
            "report": report,
        }));
        reports.push((ref_episode.series.clone(), report));
    }
    if let Some(((series, season, episode), _)) = rec_index.into_iter().next() {
        anyhow::bail!("reference corpus is missing {series} S{season:02}E{episode:02}");
    }

    let rows = summarize_by_series(&reports);
    let rendered = match format {
        OutputFormat::Table => render_error_table(&rows),
        OutputFormat::Csv => render_error_csv(&rows),
        OutputFormat::Json => format!(
            "{:#}\n",
            json!({
                "series": rows,
                "episodes": episode_rows,
            })
        ),
    };
    print!("{rendered}");
    if let Some(path) = output {
        write_text(path, &rendered)?;
    }
    Ok(ExitCode::SUCCESS)
}
