//! Word- and sentence-level error accounting between recovered and
//! reference episodes.
//!
//! Punctuation conventions differ between annotation and subtitle text, so
//! punctuation signs are removed from both sequences before any counting.
//! Counts come from a minimal unit-cost edit alignment; when several
//! alignments share the minimal cost, the one with the most substitutions
//! (fewest insert+delete pairs) is reported, which pins the decomposition
//! deterministically.

use crate::model::{Episode, Token, TokenKind};
use crate::recover::{parse_marker, Marked};
use serde::Serialize;
use thiserror::Error;

/// Insertion/deletion/substitution counts relative to a reference sequence.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    pub ins: usize,
    pub del: usize,
    pub sub: usize,
}

impl ErrorCounts {
    pub fn total(&self) -> usize {
        self.ins + self.del + self.sub
    }
}

/// Removes punctuation tokens, preserving order.
pub fn strip_punctuation(tokens: &[Token]) -> Vec<&Token> {
    tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Punctuation)
        .collect()
}

#[derive(Copy, Clone, PartialEq, Eq)]
struct Cell {
    total: u32,
    ins: u32,
    del: u32,
    sub: u32,
}

const UNREACHED: Cell = Cell {
    total: u32::MAX,
    ins: 0,
    del: 0,
    sub: 0,
};

impl Cell {
    fn key(&self) -> (u32, u32) {
        (self.total, self.ins + self.del)
    }

    fn plus_ins(mut self) -> Cell {
        self.total += 1;
        self.ins += 1;
        self
    }

    fn plus_del(mut self) -> Cell {
        self.total += 1;
        self.del += 1;
        self
    }

    fn plus_sub(mut self, mismatch: bool) -> Cell {
        if mismatch {
            self.total += 1;
            self.sub += 1;
        }
        self
    }
}

fn better(a: Cell, b: Cell) -> Cell {
    if a.total == u32::MAX {
        return b;
    }
    if b.total == u32::MAX || a.key() <= b.key() {
        a
    } else {
        b
    }
}

/// Banded pass with half-width `band`; exact when the returned total <= band.
fn banded_errors<T: Eq>(reference: &[T], hypothesis: &[T], band: usize) -> Cell {
    let n = reference.len();
    let m = hypothesis.len();
    let width = 2 * band + 1;
    let col = |i: usize, j: usize| j + band - i; // offset into the band row

    let mut prev = vec![UNREACHED; width];
    let mut row = vec![UNREACHED; width];
    for j in 0..=band.min(m) {
        prev[col(0, j)] = Cell {
            total: j as u32,
            ins: j as u32,
            del: 0,
            sub: 0,
        };
    }
    for i in 1..=n {
        row.fill(UNREACHED);
        let lo = i.saturating_sub(band);
        let hi = (i + band).min(m);
        for j in lo..=hi {
            let mut best = UNREACHED;
            if j > 0 && j - 1 + band >= i.saturating_sub(1) && j - 1 <= i - 1 + band {
                let diag = prev[col(i - 1, j - 1)];
                if diag.total != u32::MAX {
                    best = better(best, diag.plus_sub(reference[i - 1] != hypothesis[j - 1]));
                }
            }
            if j + band >= i - 1 && j <= i - 1 + band {
                let up = prev[col(i - 1, j)];
                if up.total != u32::MAX {
                    best = better(best, up.plus_del());
                }
            }
            if j > lo {
                let left = row[col(i, j - 1)];
                if left.total != u32::MAX {
                    best = better(best, left.plus_ins());
                }
            }
            row[col(i, j)] = best;
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[col(n, m)]
}

/// Minimal-edit error counts between a reference and a hypothesis sequence.
///
/// Swapping the arguments exchanges `ins` and `del` and leaves `sub` alone.
pub fn word_errors<T: Eq>(reference: &[T], hypothesis: &[T]) -> ErrorCounts {
    let n = reference.len();
    let m = hypothesis.len();
    if n == 0 {
        return ErrorCounts {
            ins: m,
            del: 0,
            sub: 0,
        };
    }
    if m == 0 {
        return ErrorCounts {
            ins: 0,
            del: n,
            sub: 0,
        };
    }
    let mut band = n.abs_diff(m).max(8);
    loop {
        let cell = banded_errors(reference, hypothesis, band);
        if cell.total != u32::MAX && cell.total as usize <= band {
            return ErrorCounts {
                ins: cell.ins as usize,
                del: cell.del as usize,
                sub: cell.sub as usize,
            };
        }
        if band >= n.max(m) {
            // The full table fits in the band; the value is exact.
            return ErrorCounts {
                ins: cell.ins as usize,
                del: cell.del as usize,
                sub: cell.sub as usize,
            };
        }
        band = (band * 2).min(n.max(m));
    }
}

/// Word- and sentence-level error report for one episode.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    /// Reference token count after punctuation stripping.
    pub tokens: usize,
    pub ins: usize,
    pub del: usize,
    pub sub: usize,
    /// (ins + del + sub) / tokens; may exceed 1.
    pub wer: f64,
    /// Fraction of turns whose stripped token sequences differ at all.
    pub ser: f64,
    pub turns: usize,
    pub erroneous_turns: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("turn count mismatch: reference has {reference}, recovered has {recovered}")]
    TurnCountMismatch { reference: usize, recovered: usize },
}

fn hypothesis_words(tokens: &[Token]) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Punctuation)
        .filter_map(|t| match parse_marker(&t.text) {
            Marked::Deleted => None,
            Marked::Substituted(w) => Some(w.to_string()),
            Marked::Plain(w) => Some(w.to_string()),
        })
        .collect()
}

/// Compares a recovered episode against its clear reference. The recovered
/// side may carry `<>` and `<word>` markers: `<>` contributes nothing (a
/// deletion), `<word>` contributes `word`.
pub fn episode_report(reference: &Episode, recovered: &Episode) -> Result<ErrorReport, EvalError> {
    if reference.turns.len() != recovered.turns.len() {
        return Err(EvalError::TurnCountMismatch {
            reference: reference.turns.len(),
            recovered: recovered.turns.len(),
        });
    }

    let mut ref_words: Vec<&str> = Vec::new();
    let mut hyp_words: Vec<String> = Vec::new();
    let mut erroneous_turns = 0usize;
    for (ref_turn, rec_turn) in reference.turns.iter().zip(recovered.turns.iter()) {
        let r: Vec<&str> = strip_punctuation(&ref_turn.tokens)
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        let h = hypothesis_words(&rec_turn.tokens);
        if r.iter().copied().ne(h.iter().map(|s| s.as_str())) {
            erroneous_turns += 1;
        }
        ref_words.extend(r);
        hyp_words.extend(h);
    }

    let hyp_refs: Vec<&str> = hyp_words.iter().map(|s| s.as_str()).collect();
    let counts = word_errors(&ref_words, &hyp_refs);
    let tokens = ref_words.len();
    let turns = reference.turns.len();
    Ok(ErrorReport {
        tokens,
        ins: counts.ins,
        del: counts.del,
        sub: counts.sub,
        wer: counts.total() as f64 / tokens.max(1) as f64,
        ser: if turns == 0 {
            0.0
        } else {
            erroneous_turns as f64 / turns as f64
        },
        turns,
        erroneous_turns,
    })
}

/// Per-episode means over one series, the shape error tables are reported in.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesErrorSummary {
    pub series: String,
    pub episodes: usize,
    pub wer_pct: f64,
    pub ser_pct: f64,
    pub tokens: f64,
    pub ins: f64,
    pub del: f64,
    pub sub: f64,
}

/// Averages per-episode reports by series; rows sorted by series name.
pub fn summarize_by_series(reports: &[(String, ErrorReport)]) -> Vec<SeriesErrorSummary> {
    let mut by_series: std::collections::BTreeMap<&str, Vec<&ErrorReport>> = Default::default();
    for (series, report) in reports {
        by_series.entry(series).or_default().push(report);
    }
    by_series
        .into_iter()
        .map(|(series, reports)| {
            let n = reports.len() as f64;
            let mean =
                |f: &dyn Fn(&ErrorReport) -> f64| reports.iter().map(|r| f(r)).sum::<f64>() / n;
            SeriesErrorSummary {
                series: series.to_string(),
                episodes: reports.len(),
                wer_pct: mean(&|r| r.wer * 100.0),
                ser_pct: mean(&|r| r.ser * 100.0),
                tokens: mean(&|r| r.tokens as f64),
                ins: mean(&|r| r.ins as f64),
                del: mean(&|r| r.del as f64),
                sub: mean(&|r| r.sub as f64),
            }
        })
        .collect()
}

/// Aligned plain-text table, percentages to one decimal.
pub fn render_error_table(rows: &[SeriesErrorSummary]) -> String {
    let mut out = String::new();
    let width = rows
        .iter()
        .map(|r| r.series.len())
        .max()
        .unwrap_or(4)
        .max(6);
    out.push_str(&format!(
        "{:<width$} {:>8} {:>8} {:>10} {:>7} {:>7} {:>7}\n",
        "series", "wer", "ser", "tokens", "ins", "del", "sub",
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<width$} {:>8.1} {:>8.1} {:>10.1} {:>7.1} {:>7.1} {:>7.1}\n",
            r.series, r.wer_pct, r.ser_pct, r.tokens, r.ins, r.del, r.sub,
        ));
    }
    out
}

/// The same rows as CSV.
pub fn render_error_csv(rows: &[SeriesErrorSummary]) -> String {
    let mut out = String::from("series,episodes,wer_pct,ser_pct,tokens,ins,del,sub\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.1},{:.1},{:.1},{:.1},{:.1},{:.1}\n",
            r.series, r.episodes, r.wer_pct, r.ser_pct, r.tokens, r.ins, r.del, r.sub,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SpeechTurn, TimeMs};

    #[test]
    fn identical_sequences_have_no_errors() {
        assert_eq!(
            word_errors(&["a", "b", "c"], &["a", "b", "c"]),
            ErrorCounts::default()
        );
    }

    #[test]
    fn single_mismatch_is_a_substitution() {
        let counts = word_errors(&["a", "b", "c"], &["a", "x", "c"]);
        assert_eq!(
            counts,
            ErrorCounts {
                ins: 0,
                del: 0,
                sub: 1
            }
        );
    }

    #[test]
    fn swapping_arguments_exchanges_ins_and_del() {
        let r = ["a", "b", "c", "d"];
        let h = ["a", "c", "x", "d", "y"];
        let fwd = word_errors(&r, &h);
        let rev = word_errors(&h, &r);
        assert_eq!(fwd.ins, rev.del);
        assert_eq!(fwd.del, rev.ins);
        assert_eq!(fwd.sub, rev.sub);
    }

    #[test]
    fn substitutions_preferred_over_insert_delete_pairs() {
        // Both decompositions cost 2; the substitution-heavy one wins.
        let counts = word_errors(&["a", "b"], &["b", "a"]);
        assert_eq!(
            counts,
            ErrorCounts {
                ins: 0,
                del: 0,
                sub: 2
            }
        );
    }

    #[test]
    fn empty_sides() {
        assert_eq!(word_errors::<&str>(&[], &[]), ErrorCounts::default());
        assert_eq!(
            word_errors(&[], &["a", "b"]),
            ErrorCounts {
                ins: 2,
                del: 0,
                sub: 0
            }
        );
        assert_eq!(
            word_errors(&["a", "b"], &[]),
            ErrorCounts {
                ins: 0,
                del: 2,
                sub: 0
            }
        );
    }

    #[test]
    fn long_shifted_sequences_stay_exact() {
        // The shifted alignment (50 del + 50 ins, cost 100) beats the
        // positional all-substitution one (cost 200); the band must widen
        // past its initial width to find it.
        let reference: Vec<u32> = (0..200).collect();
        let hypothesis: Vec<u32> = (50..250).collect();
        let counts = word_errors(&reference, &hypothesis);
        assert_eq!(
            counts,
            ErrorCounts {
                ins: 50,
                del: 50,
                sub: 0
            }
        );
    }

    #[test]
    fn equal_cost_shift_resolves_to_substitutions() {
        // Shifting by the full length costs the same as substituting every
        // position; the tie-break picks the substitutions.
        let reference: Vec<u32> = (0..20).collect();
        let hypothesis: Vec<u32> = (10..30).collect();
        let counts = word_errors(&reference, &hypothesis);
        assert_eq!(
            counts,
            ErrorCounts {
                ins: 0,
                del: 0,
                sub: 20
            }
        );
    }

    #[test]
    fn strip_punctuation_keeps_words_in_order() {
        let tokens = vec![
            Token::word("I"),
            Token::word("am"),
            Token::punctuation("."),
            Token::word("fine"),
        ];
        let words: Vec<&str> = strip_punctuation(&tokens)
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(words, vec!["I", "am", "fine"]);

        let only_punct = vec![Token::punctuation("!"), Token::punctuation("?")];
        assert!(strip_punctuation(&only_punct).is_empty());

        let mixed = crate::text::tokenize("Why?!");
        let words: Vec<&str> = strip_punctuation(&mixed)
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(words, vec!["Why"]);
    }

    fn turn(texts: &[&str]) -> SpeechTurn {
        SpeechTurn {
            start: TimeMs(0),
            end: TimeMs(1000),
            speaker: "s".into(),
            addressees: None,
            tokens: texts
                .iter()
                .map(|t| {
                    if matches!(*t, "." | "?" | "!" | "," | "…") {
                        Token::punctuation(*t)
                    } else {
                        Token::word(*t)
                    }
                })
                .collect(),
        }
    }

    fn episode(turns: Vec<SpeechTurn>) -> Episode {
        Episode {
            series: "demo".into(),
            season: 1,
            episode: 1,
            duration: TimeMs(100_000),
            encrypted: false,
            digits: None,
            turns,
            scenes: None,
            shots: None,
        }
    }

    #[test]
    fn perfect_recovery_reports_zero() {
        let reference = episode(vec![turn(&["I", "am", "fine", "."])]);
        let report = episode_report(&reference, &reference.clone()).unwrap();
        assert_eq!(report.wer, 0.0);
        assert_eq!(report.ser, 0.0);
        assert_eq!(report.tokens, 3);
    }

    #[test]
    fn deletion_marker_counts_as_deletion() {
        let reference = episode(vec![turn(&["I", "am", "going", "home", "."])]);
        let recovered = episode(vec![turn(&["I", "am", "<>", "home", "."])]);
        let report = episode_report(&reference, &recovered).unwrap();
        assert_eq!(report.del, 1);
        assert_eq!(report.ins, 0);
        assert_eq!(report.sub, 0);
        assert_eq!(report.tokens, 4);
        assert!((report.wer - 0.25).abs() < 1e-12);
        assert_eq!(report.ser, 1.0);
    }

    #[test]
    fn substitution_marker_contributes_its_word() {
        let reference = episode(vec![turn(&["Why", "?"])]);
        let recovered = episode(vec![turn(&["<why>", "?"])]);
        let report = episode_report(&reference, &recovered).unwrap();
        assert_eq!(report.sub, 1);
        assert_eq!(report.tokens, 1);
    }

    #[test]
    fn punctuation_only_differences_do_not_count() {
        let reference = episode(vec![turn(&["fine", "."])]);
        let recovered = episode(vec![turn(&["fine", "…"])]);
        let report = episode_report(&reference, &recovered).unwrap();
        assert_eq!(report.wer, 0.0);
        assert_eq!(report.ser, 0.0);
    }

    #[test]
    fn turn_count_mismatch_is_an_error() {
        let reference = episode(vec![turn(&["a"]), turn(&["b"])]);
        let recovered = episode(vec![turn(&["a"])]);
        assert_eq!(
            episode_report(&reference, &recovered),
            Err(EvalError::TurnCountMismatch {
                reference: 2,
                recovered: 1
            })
        );
    }

    #[test]
    fn series_summary_averages_per_episode() {
        let r1 = ErrorReport {
            tokens: 100,
            ins: 0,
            del: 2,
            sub: 0,
            wer: 0.02,
            ser: 0.1,
            turns: 10,
            erroneous_turns: 1,
        };
        let r2 = ErrorReport {
            tokens: 200,
            ins: 2,
            del: 0,
            sub: 2,
            wer: 0.02,
            ser: 0.2,
            turns: 10,
            erroneous_turns: 2,
        };
        let rows = summarize_by_series(&[("bb".into(), r1), ("bb".into(), r2)]);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].episodes, 2);
        assert!((rows[0].wer_pct - 2.0).abs() < 1e-9);
        assert!((rows[0].tokens - 150.0).abs() < 1e-9);
        assert!((rows[0].del - 1.0).abs() < 1e-9);
    }

    #[test]
    fn table_uses_one_decimal() {
        let rows = summarize_by_series(&[(
            "got".into(),
            ErrorReport {
                tokens: 4353,
                ins: 0,
                del: 14,
                sub: 2,
                wer: 0.00367,
                ser: 0.012,
                turns: 500,
                erroneous_turns: 6,
            },
        )]);
        let table = render_error_table(&rows);
        assert!(table.contains("0.4"), "{table}");
        assert!(table.contains("got"), "{table}");
    }
}
