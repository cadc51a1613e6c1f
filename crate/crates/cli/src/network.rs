use crate::util::{ensure_dir, load_corpus, series_names, write_text};
use std::path::Path;
use std::process::ExitCode;
use turnkit::stats::network::{
    build_network, centralities, edge_list_csv, to_graphml, BetweennessWeighting,
};

/// Builds one conversational network per series and exports the weighted
/// edge list, per-speaker centralities and a GraphML file for each.
pub fn run(input: &Path, output: &Path, weighted: bool) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(input)?;
    if corpus.is_empty() {
        anyhow::bail!("no episode files found in {}", input.display());
    }
    ensure_dir(output)?;

    let weighting = if weighted {
        BetweennessWeighting::InverseWeight
    } else {
        BetweennessWeighting::Unweighted
    };

    let mut any_edges = false;
    for series in series_names(&corpus) {
        let episodes: Vec<turnkit::Episode> = corpus
            .iter()
            .filter(|(_, e)| e.series == series)
            .map(|(_, e)| e.clone())
            .collect();
        let network = build_network(&episodes);
        if network.is_empty() {
            println!("{series}: no addressee annotations, skipped");
            continue;
        }
        any_edges = true;
        let scores = centralities(&network, weighting);

        write_text(
            &output.join(format!("{series}_edges.csv")),
            &edge_list_csv(&network),
        )?;
        let mut centrality_csv = String::from("speaker,degree,weighted_degree,betweenness\n");
        for c in &scores {
            centrality_csv.push_str(&format!(
                "{},{},{},{}\n",
                c.speaker, c.degree, c.weighted_degree, c.betweenness
            ));
        }
        write_text(
            &output.join(format!("{series}_centralities.csv")),
            &centrality_csv,
        )?;
        write_text(
            &output.join(format!("{series}.graphml")),
            &to_graphml(&network, &scores),
        )?;

        let mut top = scores.clone();
        top.sort_by(|a, b| b.betweenness.partial_cmp(&a.betweenness).unwrap());
        let bridges: Vec<String> = top.iter().take(3).map(|c| c.speaker.clone()).collect();
        println!(
            "{series}: {} speakers, {} edges; highest betweenness: {}",
            network.vertices.len(),
            network.edges.len(),
            bridges.join(", ")
        );
    }

    if !any_edges {
        anyhow::bail!(
            "no addressee annotations anywhere in {}; nothing to build",
            input.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}
