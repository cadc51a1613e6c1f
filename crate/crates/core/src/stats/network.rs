//! Conversational networks from addressee annotations, with degree and
//! betweenness centralities.
//!
//! One undirected edge per unordered speaker pair, weighted by the number
//! of turns either one addressed to the other. Turns with an empty
//! addressee list are soliloquies and contribute nothing; self-addressed
//! turns are ignored.

use crate::model::Episode;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

/// Weighted undirected interaction graph; vertices are sorted speaker labels.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConversationalNetwork {
    pub vertices: Vec<String>,
    /// Edges as (vertex index, vertex index, weight), with `a < b`, sorted.
    pub edges: Vec<(usize, usize, u64)>,
}

impl ConversationalNetwork {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }
}

/// Builds the interaction network over every turn that carries addressees.
pub fn build_network(episodes: &[Episode]) -> ConversationalNetwork {
    let mut weights: BTreeMap<(String, String), u64> = BTreeMap::new();
    for episode in episodes {
        for turn in &episode.turns {
            let Some(addressees) = &turn.addressees else {
                continue;
            };
            for addressee in addressees {
                if *addressee == turn.speaker {
                    continue;
                }
                let (a, b) = if turn.speaker < *addressee {
                    (turn.speaker.clone(), addressee.clone())
                } else {
                    (addressee.clone(), turn.speaker.clone())
                };
                *weights.entry((a, b)).or_insert(0) += 1;
            }
        }
    }

    let mut vertices: Vec<String> = weights
        .keys()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    vertices.sort();
    vertices.dedup();
    let index: BTreeMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let edges = weights
        .iter()
        .map(|((a, b), &w)| (index[a.as_str()], index[b.as_str()], w))
        .collect();
    ConversationalNetwork { vertices, edges }
}

/// Which shortest paths betweenness counts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BetweennessWeighting {
    /// Every edge has length 1 (the default reading of the network figures).
    Unweighted,
    /// Edge length is the reciprocal of its interaction count, so heavily
    /// interacting pairs are "close".
    InverseWeight,
}

/// Per-vertex centrality scores, indexed like `network.vertices`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Centrality {
    pub speaker: String,
    pub degree: usize,
    pub weighted_degree: u64,
    /// Brandes betweenness on the simple graph, unnormalized, each
    /// unordered pair counted once, endpoints excluded.
    pub betweenness: f64,
}

/// Computes degree, weighted degree and betweenness for every vertex.
pub fn centralities(
    network: &ConversationalNetwork,
    weighting: BetweennessWeighting,
) -> Vec<Centrality> {
    let n = network.vertices.len();
    let adj = network.adjacency();
    let betweenness = match weighting {
        BetweennessWeighting::Unweighted => brandes_unweighted(&adj),
        BetweennessWeighting::InverseWeight => brandes_dijkstra(&adj),
    };
    (0..n)
        .map(|v| Centrality {
            speaker: network.vertices[v].clone(),
            degree: adj[v].len(),
            weighted_degree: adj[v].iter().map(|&(_, w)| w).sum(),
            betweenness: betweenness[v],
        })
        .collect()
}

fn accumulate(
    betweenness: &mut [f64],
    stack: &mut Vec<usize>,
    preds: &[Vec<usize>],
    sigma: &[f64],
    source: usize,
) {
    let mut delta = vec![0.0; betweenness.len()];
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            if sigma[w] > 0.0 {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        if w != source {
            betweenness[w] += delta[w];
        }
    }
}

fn brandes_unweighted(adj: &[Vec<(usize, u64)>]) -> Vec<f64> {
    let n = adj.len();
    let mut betweenness = vec![0.0; n];
    for source in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[source] = 1.0;
        dist[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &(w, _) in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        accumulate(&mut betweenness, &mut stack, &preds, &sigma, source);
    }
    // Undirected: every pair was visited from both endpoints.
    for b in &mut betweenness {
        *b /= 2.0;
    }
    betweenness
}

fn brandes_dijkstra(adj: &[Vec<(usize, u64)>]) -> Vec<f64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    const EPS: f64 = 1e-12;
    let n = adj.len();
    let mut betweenness = vec![0.0; n];
    for source in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![f64::INFINITY; n];
        let mut settled = vec![false; n];
        sigma[source] = 1.0;
        dist[source] = 0.0;
        let mut heap: BinaryHeap<(Reverse<OrderedF64>, usize)> = BinaryHeap::new();
        heap.push((Reverse(OrderedF64(0.0)), source));
        while let Some((Reverse(d), v)) = heap.pop() {
            if settled[v] || d.0 > dist[v] + EPS {
                continue;
            }
            settled[v] = true;
            stack.push(v);
            for &(w, weight) in &adj[v] {
                let length = 1.0 / weight as f64;
                let candidate = dist[v] + length;
                if candidate < dist[w] - EPS {
                    dist[w] = candidate;
                    sigma[w] = sigma[v];
                    preds[w] = vec![v];
                    heap.push((Reverse(OrderedF64(candidate)), w));
                } else if (candidate - dist[w]).abs() <= EPS && !settled[w] {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        accumulate(&mut betweenness, &mut stack, &preds, &sigma, source);
    }
    for b in &mut betweenness {
        *b /= 2.0;
    }
    betweenness
}

#[derive(PartialEq)]
struct OrderedF64(f64);
impl Eq for OrderedF64 {}
impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .partial_cmp(&other.0)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}
impl PartialOrd for OrderedF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted edge list: `speaker_a,speaker_b,weight` per line.
pub fn edge_list_csv(network: &ConversationalNetwork) -> String {
    let mut out = String::from("speaker_a,speaker_b,weight\n");
    for &(a, b, w) in &network.edges {
        out.push_str(&format!(
            "{},{},{}\n",
            network.vertices[a], network.vertices[b], w
        ));
    }
    out
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// GraphML export with edge weights and node centralities as attributes.
pub fn to_graphml(network: &ConversationalNetwork, centralities: &[Centrality]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n");
    out.push_str(
        "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n",
    );
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n");
    out.push_str("  <graph edgedefault=\"undirected\">\n");
    for (i, vertex) in network.vertices.iter().enumerate() {
        out.push_str(&format!("    <node id=\"n{i}\">\n"));
        out.push_str(&format!(
            "      <data key=\"label\">{}</data>\n",
            xml_escape(vertex)
        ));
        if let Some(c) = centralities.get(i) {
            out.push_str(&format!("      <data key=\"degree\">{}</data>\n", c.degree));
            out.push_str(&format!(
                "      <data key=\"betweenness\">{}</data>\n",
                c.betweenness
            ));
        }
        out.push_str("    </node>\n");
    }
    for (k, &(a, b, w)) in network.edges.iter().enumerate() {
        out.push_str(&format!(
            "    <edge id=\"e{k}\" source=\"n{a}\" target=\"n{b}\">\n      <data key=\"weight\">{w}</data>\n    </edge>\n"
        ));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
