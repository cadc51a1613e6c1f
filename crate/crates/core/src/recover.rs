//! Clear-text recovery: aligns an encrypted episode against the encrypted
//! token stream of a user-supplied subtitle file and takes the clear words
//! back from the subtitles.
//!
//! Alignment runs on the whole-episode token stream, not per turn, because
//! subtitle and turn boundaries disagree; recovered tokens are then dealt
//! back to turns so every turn keeps its token count. Reference tokens
//! absent from the subtitles come back as the empty marker `<>`, tokens
//! whose code disagreed at an aligned position as `<word>`, and
//! subtitle-only insertions are discarded.

use crate::align::{opcodes, OpKind};
use crate::cipher::{CipherError, Code};
use crate::model::{Episode, Token, TokenKind};
use crate::srt::{parse_srt, SrtError};
use crate::text::strip_markup;
use serde::Serialize;
use thiserror::Error;

/// How a recovered token was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    /// Code matched inside an equal span; the subtitle word is trusted.
    Plain,
    /// Reference token with no subtitle counterpart.
    Deleted,
    /// Positionally paired inside a replace span; the subtitle word is
    /// reported but flagged.
    Substituted,
}

/// One recovered token; `text` is empty iff the token was deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredToken {
    pub text: String,
    pub kind: TokenKind,
    pub tag: Tag,
}

impl RecoveredToken {
    /// Renders the token the way it is written to recovered files:
    /// `<>` for deletions, `<word>` for substitutions, the bare word otherwise.
    pub fn render(&self) -> String {
        match self.tag {
            Tag::Plain => self.text.clone(),
            Tag::Deleted => "<>".to_string(),
            Tag::Substituted => format!("<{}>", self.text),
        }
    }
}

/// A token text read back from a recovered file.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Marked<'a> {
    Plain(&'a str),
    Deleted,
    Substituted(&'a str),
}

/// Interprets the `<>` / `<word>` markers embedded in recovered files.
pub fn parse_marker(text: &str) -> Marked<'_> {
    if text == "<>" {
        return Marked::Deleted;
    }
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        if !inner.is_empty() {
            return Marked::Substituted(inner);
        }
    }
    Marked::Plain(text)
}

/// Per-episode recovery accounting.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecoveryStats {
    /// Reference (annotation) tokens processed.
    pub tokens: usize,
    pub plain: usize,
    pub deleted: usize,
    pub substituted: usize,
    /// Subtitle tokens with no reference counterpart, dropped.
    pub inserts_discarded: usize,
}

#[derive(Debug, Error)]
pub enum RecoverError {
    #[error("episode is not encrypted")]
    NotEncrypted,
    #[error("no subtitle content")]
    EmptySubtitles,
}

#[derive(Debug, Error)]
pub enum SubtitleStreamError {
    #[error(transparent)]
    Srt(#[from] SrtError),
    #[error(transparent)]
    Cipher(#[from] CipherError),
}

/// Full subtitle-side pipeline: parse SRT bytes, strip markup, tokenize,
/// and encrypt each token with the same scheme as the annotations.
pub fn subtitle_stream(
    bytes: &[u8],
    digits: usize,
) -> Result<Vec<(Token, Code)>, SubtitleStreamError> {
    let cues = parse_srt(bytes)?;
    let mut out = Vec::new();
    for cue in &cues {
        for token in strip_markup(cue).tokens {
            let code = crate::cipher::encrypt_token(&token.text, digits)?;
            out.push((token, code));
        }
    }
    Ok(out)
}

/// Aligns the reference code stream against the subtitle code stream and
/// produces one recovered token per reference token.
pub fn recover_stream(
    reference: &[&Token],
    subtitles: &[(Token, Code)],
) -> (Vec<RecoveredToken>, RecoveryStats) {
    let a: Vec<&str> = reference.iter().map(|t| t.text.as_str()).collect();
    let b: Vec<&str> = subtitles.iter().map(|(_, code)| code.as_str()).collect();

    let mut out: Vec<RecoveredToken> = Vec::with_capacity(a.len());
    let mut stats = RecoveryStats {
        tokens: a.len(),
        ..Default::default()
    };

    for op in opcodes(&a, &b) {
        match op.kind {
            OpKind::Equal => {
                for (offset, _) in op.a.clone().enumerate() {
                    let sub = &subtitles[op.b.start + offset].0;
                    out.push(RecoveredToken {
                        text: sub.text.clone(),
                        kind: sub.kind,
                        tag: Tag::Plain,
                    });
                    stats.plain += 1;
                }
            }
            OpKind::Delete => {
                for dropped in &reference[op.a.clone()] {
                    out.push(RecoveredToken {
                        text: String::new(),
                        kind: dropped.kind,
                        tag: Tag::Deleted,
                    });
                    stats.deleted += 1;
                }
            }
            OpKind::Replace => {
                let paired = op.a.len().min(op.b.len());
                for offset in 0..paired {
                    let sub = &subtitles[op.b.start + offset].0;
                    out.push(RecoveredToken {
                        text: sub.text.clone(),
                        kind: sub.kind,
                        tag: Tag::Substituted,
                    });
                    stats.substituted += 1;
                }
                for leftover in &reference[op.a.start + paired..op.a.end] {
                    out.push(RecoveredToken {
                        text: String::new(),
                        kind: leftover.kind,
                        tag: Tag::Deleted,
                    });
                    stats.deleted += 1;
                }
                stats.inserts_discarded += op.b.len().saturating_sub(paired);
            }
            OpKind::Insert => {
                stats.inserts_discarded += op.b.len();
            }
        }
    }
    (out, stats)
}

/// Recovers a whole encrypted episode. The result mirrors the input episode
/// with clear token texts (markers included) and the encrypted flag cleared;
/// every turn keeps its token count.
pub fn recover_episode(
    episode: &Episode,
    subtitles: &[(Token, Code)],
) -> Result<(Episode, RecoveryStats), RecoverError> {
    if !episode.encrypted {
        return Err(RecoverError::NotEncrypted);
    }
    if subtitles.is_empty() {
        return Err(RecoverError::EmptySubtitles);
    }

    let reference: Vec<&Token> = episode.turns.iter().flat_map(|t| t.tokens.iter()).collect();
    let (recovered, stats) = recover_stream(&reference, subtitles);
    debug_assert_eq!(recovered.len(), reference.len());

    let mut out = episode.clone();
    out.encrypted = false;
    out.digits = None;
    let mut cursor = recovered.into_iter();
    for turn in &mut out.turns {
        for token in &mut turn.tokens {
            let rec = cursor
                .next()
                .expect("one recovered token per reference token");
            token.text = rec.render();
            token.kind = rec.kind;
        }
    }
    Ok((out, stats))
}
