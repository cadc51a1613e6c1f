//! Recovers provisional speech turns from cleaned subtitle cues.
//!
//! Long turns span several consecutive cues and one cue can hold several
//! turns, so cues are merged until a sentence-ending punctuation token
//! closes the turn, and split at sentence ends and dialogue dashes inside a
//! cue. When one cue splits, its time span is divided among the resulting
//! turns proportionally to their token counts; no finer word timing exists
//! at this stage. All produced turns carry the reserved "unknown" speaker.

use crate::model::{SpeechTurn, TimeMs, Token, TokenKind, UNKNOWN_SPEAKER};
use crate::text::CleanCue;
use std::collections::BTreeSet;
use std::ops::Range;

struct OpenTurn {
    start: TimeMs,
    tentative_end: TimeMs,
    tokens: Vec<Token>,
}

struct Segment {
    range: Range<usize>,
    closed: bool,
}

/// Splits a cue's token list at dialogue-dash breaks and after runs of
/// punctuation that end a sentence. `…` only closes when it ends the cue.
fn cue_segments(tokens: &[Token], breaks: &BTreeSet<usize>) -> Vec<Segment> {
    let n = tokens.len();
    let mut segments = Vec::new();
    let mut seg_start = 0;
    let mut i = 0;
    while i < n {
        if i > seg_start && breaks.contains(&i) {
            segments.push(Segment {
                range: seg_start..i,
                closed: false,
            });
            seg_start = i;
        }
        let token = &tokens[i];
        let closing = token.kind == TokenKind::Punctuation
            && match token.text.as_str() {
                "." | "!" | "?" => true,
                "…" => i == n - 1,
                _ => false,
            };
        if closing {
            // Keep stacked end marks ("?!") and trailing quotes with the
            // sentence they close.
            let mut j = i;
            while j + 1 < n
                && tokens[j + 1].kind == TokenKind::Punctuation
                && matches!(tokens[j + 1].text.as_str(), "." | "!" | "?" | "…" | "\"")
                && !breaks.contains(&(j + 1))
            {
                j += 1;
            }
            segments.push(Segment {
                range: seg_start..j + 1,
                closed: true,
            });
            seg_start = j + 1;
            i = j + 1;
        } else {
            i += 1;
        }
    }
    if seg_start < n {
        segments.push(Segment {
            range: seg_start..n,
            closed: false,
        });
    }
    segments
}

/// Proportional-by-token-count boundary times inside a cue, forced strictly
/// increasing. Returns `None` when the cue is too short (in milliseconds)
/// to host that many turns, in which case the cue is not split.
fn segment_boundaries(cue_start: TimeMs, cue_end: TimeMs, counts: &[usize]) -> Option<Vec<TimeMs>> {
    let k = counts.len();
    let span = cue_start.until(cue_end);
    if span < k as u64 {
        return None;
    }
    let total: usize = counts.iter().sum();
    let mut bounds = Vec::with_capacity(k + 1);
    bounds.push(cue_start.as_millis());
    let mut seen = 0usize;
    for &c in &counts[..k - 1] {
        seen += c;
        let t = cue_start.as_millis() + (span as f64 * seen as f64 / total as f64).round() as u64;
        bounds.push(t);
    }
    bounds.push(cue_end.as_millis());
    for m in 1..bounds.len() {
        bounds[m] = bounds[m].max(bounds[m - 1] + 1);
    }
    for m in (1..bounds.len() - 1).rev() {
        bounds[m] = bounds[m].min(bounds[m + 1] - 1);
    }
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    Some(bounds.into_iter().map(TimeMs).collect())
}

/// Merges and splits cleaned cues into speech turns.
pub fn segment_turns(cues: &[CleanCue]) -> Vec<SpeechTurn> {
    let mut turns: Vec<SpeechTurn> = Vec::new();
    let mut open: Option<OpenTurn> = None;

    let finalize = |turns: &mut Vec<SpeechTurn>, t: OpenTurn, end: TimeMs| {
        turns.push(SpeechTurn {
            start: t.start,
            end,
            speaker: UNKNOWN_SPEAKER.to_string(),
            addressees: None,
            tokens: t.tokens,
        });
    };

    for cue in cues {
        if cue.is_empty() {
            continue;
        }
        let breaks: BTreeSet<usize> = cue.speaker_breaks.iter().copied().collect();
        if breaks.contains(&0) {
            if let Some(t) = open.take() {
                let end = t.tentative_end;
                finalize(&mut turns, t, end);
            }
        }

        let mut segments = cue_segments(&cue.tokens, &breaks);
        let counts: Vec<usize> = segments.iter().map(|s| s.range.len()).collect();
        let bounds = match segment_boundaries(cue.start, cue.end, &counts) {
            Some(b) => b,
            None => {
                // Degenerate cue: not enough milliseconds to split, keep it whole.
                let closed = segments.last().is_some_and(|s| s.closed);
                segments = vec![Segment {
                    range: 0..cue.tokens.len(),
                    closed,
                }];
                vec![cue.start, cue.end]
            }
        };

        for (m, segment) in segments.into_iter().enumerate() {
            let seg_tokens = cue.tokens[segment.range].to_vec();
            let seg_end = bounds[m + 1];
            if m > 0 {
                // A later segment always starts a new turn; flush whatever
                // the first segment left open.
                if let Some(t) = open.take() {
                    let end = t.tentative_end;
                    finalize(&mut turns, t, end);
                }
            }
            match &mut open {
                Some(t) => {
                    t.tokens.extend(seg_tokens);
                    t.tentative_end = seg_end;
                    if segment.closed {
                        let t = open.take().unwrap();
                        finalize(&mut turns, t, seg_end);
                    }
                }
                None => {
                    let t = OpenTurn {
                        start: bounds[m],
                        tentative_end: seg_end,
                        tokens: seg_tokens,
                    };
                    if segment.closed {
                        finalize(&mut turns, t, seg_end);
                    } else {
                        open = Some(t);
                    }
                }
            }
        }
    }
    if let Some(t) = open.take() {
        let end = t.tentative_end;
        finalize(&mut turns, t, end);
    }
    turns
}
