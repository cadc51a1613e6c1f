//! Gestalt (Ratcliff-Obershelp) sequence matching.
//!
//! Recursively finds the longest matching block between two sequences, then
//! matches the pieces to its left and right. Ties on block length are broken
//! toward the smallest start in the first sequence, then the smallest start
//! in the second, so results are identical across platforms. No junk or
//! popularity heuristic is applied: with a 4,096-code space over thousands
//! of tokens, frequent elements are expected and must not be ignored.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::Range;

/// A maximal run of equal elements: `a[a_start..a_start+len] == b[b_start..b_start+len]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MatchBlock {
    pub a_start: usize,
    pub b_start: usize,
    pub len: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    Equal,
    Replace,
    Delete,
    Insert,
}

/// One edit operation over half-open index ranges. Taken in order, the
/// `a` ranges tile the first sequence and the `b` ranges tile the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditOp {
    pub kind: OpKind,
    pub a: Range<usize>,
    pub b: Range<usize>,
}

fn index_b<T: Eq + Hash>(b: &[T]) -> HashMap<&T, Vec<usize>> {
    let mut b2j: HashMap<&T, Vec<usize>> = HashMap::new();
    for (j, item) in b.iter().enumerate() {
        b2j.entry(item).or_default().push(j);
    }
    b2j
}

/// Longest block with `a_start` in `[alo, ahi)` and `b_start` in `[blo, bhi)`;
/// ties go to the smallest `a_start`, then the smallest `b_start`.
fn find_longest_match<T: Eq + Hash>(
    a: &[T],
    b2j: &HashMap<&T, Vec<usize>>,
    alo: usize,
    ahi: usize,
    blo: usize,
    bhi: usize,
) -> MatchBlock {
    let mut best = MatchBlock {
        a_start: alo,
        b_start: blo,
        len: 0,
    };
    let mut j2len: HashMap<usize, usize> = HashMap::new();
    for (i, item) in a.iter().enumerate().take(ahi).skip(alo) {
        let mut new_j2len = HashMap::new();
        if let Some(positions) = b2j.get(item) {
            for &j in positions {
                if j < blo {
                    continue;
                }
                if j >= bhi {
                    break;
                }
                let k = if j > 0 {
                    j2len.get(&(j - 1)).copied().unwrap_or(0) + 1
                } else {
                    1
                };
                new_j2len.insert(j, k);
                if k > best.len {
                    best = MatchBlock {
                        a_start: i + 1 - k,
                        b_start: j + 1 - k,
                        len: k,
                    };
                }
            }
        }
        j2len = new_j2len;
    }
    best
}

/// All matching blocks in order of position, adjacent blocks merged.
pub fn matching_blocks<T: Eq + Hash>(a: &[T], b: &[T]) -> Vec<MatchBlock> {
    let b2j = index_b(b);
    let mut queue = vec![(0, a.len(), 0, b.len())];
    let mut found = Vec::new();
    while let Some((alo, ahi, blo, bhi)) = queue.pop() {
        let block = find_longest_match(a, &b2j, alo, ahi, blo, bhi);
        if block.len > 0 {
            if alo < block.a_start && blo < block.b_start {
                queue.push((alo, block.a_start, blo, block.b_start));
            }
            if block.a_start + block.len < ahi && block.b_start + block.len < bhi {
                queue.push((
                    block.a_start + block.len,
                    ahi,
                    block.b_start + block.len,
                    bhi,
                ));
            }
            found.push(block);
        }
    }
    found.sort_by_key(|m| (m.a_start, m.b_start));

    let mut merged: Vec<MatchBlock> = Vec::with_capacity(found.len());
    for block in found {
        match merged.last_mut() {
            Some(last)
                if last.a_start + last.len == block.a_start
                    && last.b_start + last.len == block.b_start =>
            {
                last.len += block.len;
            }
            _ => merged.push(block),
        }
    }
    merged
}

/// Edit script derived from the matching blocks: gaps between consecutive
/// blocks become replace/delete/insert, the blocks themselves equal.
pub fn opcodes<T: Eq + Hash>(a: &[T], b: &[T]) -> Vec<EditOp> {
    let blocks = matching_blocks(a, b);
    let mut ops = Vec::with_capacity(2 * blocks.len() + 1);
    let (mut i, mut j) = (0usize, 0usize);
    let sentinel = MatchBlock {
        a_start: a.len(),
        b_start: b.len(),
        len: 0,
    };
    for block in blocks.into_iter().chain(std::iter::once(sentinel)) {
        let kind = if i < block.a_start && j < block.b_start {
            Some(OpKind::Replace)
        } else if i < block.a_start {
            Some(OpKind::Delete)
        } else if j < block.b_start {
            Some(OpKind::Insert)
        } else {
            None
        };
        if let Some(kind) = kind {
            ops.push(EditOp {
                kind,
                a: i..block.a_start,
                b: j..block.b_start,
            });
        }
        i = block.a_start + block.len;
        j = block.b_start + block.len;
        if block.len > 0 {
            ops.push(EditOp {
                kind: OpKind::Equal,
                a: block.a_start..i,
                b: block.b_start..j,
            });
        }
    }
    ops
}
