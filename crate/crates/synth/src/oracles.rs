//! Brute-force reference implementations used as test oracles. Each one is
//! deliberately naive and shares no code with the library paths it checks.

use std::collections::{HashMap, HashSet, VecDeque};

/// Betweenness by explicit enumeration of every shortest path between every
/// unordered pair: each pair contributes `paths through v / total paths` to
/// every interior vertex. Feasible for graphs up to ~8 vertices.
pub fn brute_force_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut betweenness = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            // BFS distances from s.
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if dist[t] == usize::MAX {
                continue;
            }
            // Every shortest path s -> t by backward DFS over the BFS DAG.
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![(t, vec![t])];
            while let Some((v, path)) = stack.pop() {
                if v == s {
                    paths.push(path);
                    continue;
                }
                for &w in &adj[v] {
                    if dist[w] + 1 == dist[v] {
                        let mut longer = path.clone();
                        longer.push(w);
                        stack.push((w, longer));
                    }
                }
            }
            let total = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    betweenness[v] += 1.0 / total;
                }
            }
        }
    }
    betweenness
}

/// All distinct longest common subsequences (as symbol strings), capped at
/// `cap` entries. `None` means the LCS is empty.
fn lcs_strings(a: &[u32], b: &[u32], cap: usize) -> HashSet<Vec<u32>> {
    let n = a.len();
    let m = b.len();
    let mut table = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            table[i][j] = if a[i] == b[j] {
                1 + table[i + 1][j + 1]
            } else {
                table[i + 1][j].max(table[i][j + 1])
            };
        }
    }
    fn collect(
        a: &[u32],
        b: &[u32],
        table: &[Vec<usize>],
        i: usize,
        j: usize,
        cap: usize,
        memo: &mut HashMap<(usize, usize), HashSet<Vec<u32>>>,
    ) -> HashSet<Vec<u32>> {
        if table[i][j] == 0 {
            return HashSet::from([Vec::new()]);
        }
        if let Some(hit) = memo.get(&(i, j)) {
            return hit.clone();
        }
        let mut out = HashSet::new();
        if a[i] == b[j] && table[i][j] == 1 + table[i + 1][j + 1] {
            for mut tail in collect(a, b, table, i + 1, j + 1, cap, memo) {
                tail.insert(0, a[i]);
                out.insert(tail);
                if out.len() > cap {
                    break;
                }
            }
        }
        if table[i + 1][j] == table[i][j] {
            out.extend(collect(a, b, table, i + 1, j, cap, memo));
        }
        if out.len() <= cap && table[i][j + 1] == table[i][j] {
            out.extend(collect(a, b, table, i, j + 1, cap, memo));
        }
        let len = table[i][j];
        out.retain(|s| s.len() == len);
        memo.insert((i, j), out.clone());
        out
    }
    let mut memo = HashMap::new();
    collect(a, b, &table, 0, 0, cap, &mut memo)
}

/// The longest common subsequence when it is unique as a symbol string,
/// `None` otherwise (including the empty-LCS case).
pub fn unique_lcs(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let strings = lcs_strings(a, b, 2);
    if strings.len() == 1 {
        let lcs = strings.into_iter().next().unwrap();
        (!lcs.is_empty()).then_some(lcs)
    } else {
        None
    }
}

/// Minimal unit-cost edit counts by exhaustive memoized recursion,
/// minimizing total errors first and insert+delete pairs second (that is,
/// preferring substitutions). Returns (ins, del, sub).
pub fn edit_counts_oracle(a: &[u32], b: &[u32]) -> (usize, usize, usize) {
    type Key = (usize, usize);
    fn best(
        a: &[u32],
        b: &[u32],
        i: usize,
        j: usize,
        memo: &mut HashMap<Key, (usize, usize, usize)>,
    ) -> (usize, usize, usize) {
        if i == a.len() {
            return (b.len() - j, 0, 0);
        }
        if j == b.len() {
            return (0, a.len() - i, 0);
        }
        if let Some(&hit) = memo.get(&(i, j)) {
            return hit;
        }
        let mut candidates = Vec::with_capacity(3);
        let (ins, del, sub) = best(a, b, i + 1, j + 1, memo);
        candidates.push(if a[i] == b[j] {
            (ins, del, sub)
        } else {
            (ins, del, sub + 1)
        });
        let (ins, del, sub) = best(a, b, i + 1, j, memo);
        candidates.push((ins, del + 1, sub));
        let (ins, del, sub) = best(a, b, i, j + 1, memo);
        candidates.push((ins + 1, del, sub));
        let winner = candidates
            .into_iter()
            .min_by_key(|&(ins, del, sub)| (ins + del + sub, ins + del))
            .unwrap();
        memo.insert((i, j), winner);
        winner
    }
    best(a, b, 0, 0, &mut HashMap::new())
}
