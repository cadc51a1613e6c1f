//! MTLD lexical diversity (measure of textual lexical diversity).
//!
//! Token count divided by the number of factors: scanning forward, a factor
//! closes whenever the running type-token ratio drops below the threshold;
//! the leftover stretch contributes a partial factor `(1 - TTR) / (1 -
//! threshold)`. The measure is the mean of the forward and backward passes.
//! Word tokens only, case-folded; punctuation never counts.

use crate::model::{Token, TokenKind};
use std::collections::HashSet;
use thiserror::Error;

/// Threshold the measure is conventionally reported at.
pub const MTLD_DEFAULT_THRESHOLD: f64 = 0.72;

#[derive(Debug, Error, PartialEq)]
pub enum MtldError {
    #[error("threshold must be strictly between 0 and 1, got {0}")]
    BadThreshold(f64),
    #[error("undefined MTLD: no factor ever completed (text too short or all types distinct)")]
    Undefined,
}

fn factors<'a>(words: impl Iterator<Item = &'a str>, threshold: f64) -> f64 {
    let mut total = 0.0f64;
    let mut types: HashSet<&str> = HashSet::new();
    let mut tokens = 0usize;
    let mut ttr = 1.0f64;
    for word in words {
        tokens += 1;
        types.insert(word);
        ttr = types.len() as f64 / tokens as f64;
        if ttr < threshold {
            total += 1.0;
            types.clear();
            tokens = 0;
            ttr = 1.0;
        }
    }
    if tokens > 0 {
        total += (1.0 - ttr) / (1.0 - threshold);
    }
    total
}

/// MTLD over case-folded word strings.
pub fn mtld_words<S: AsRef<str>>(words: &[S], threshold: f64) -> Result<f64, MtldError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(MtldError::BadThreshold(threshold));
    }
    let folded: Vec<String> = words.iter().map(|w| w.as_ref().to_lowercase()).collect();
    let forward = factors(folded.iter().map(|s| s.as_str()), threshold);
    let backward = factors(folded.iter().rev().map(|s| s.as_str()), threshold);
    if forward == 0.0 || backward == 0.0 {
        return Err(MtldError::Undefined);
    }
    let n = folded.len() as f64;
    Ok((n / forward + n / backward) / 2.0)
}

/// MTLD over a token stream; punctuation tokens are excluded first.
pub fn mtld(tokens: &[Token], threshold: f64) -> Result<f64, MtldError> {
    let words: Vec<&str> = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.text.as_str())
        .collect();
    mtld_words(&words, threshold)
}
