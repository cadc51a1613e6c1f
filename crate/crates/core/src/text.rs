//! Subtitle text normalization: markup stripping and tokenization.
//!
//! Subtitles carry insertions the annotation text never contains: formatting
//! tags, whole-line sound captions, speaker-name prefixes for off-screen
//! characters, and dialogue dashes. [`strip_markup`] removes them and
//! [`tokenize`] turns the remaining text into word and punctuation tokens.

use crate::model::{TimeMs, Token, TokenKind};
use crate::srt::SubtitleCue;
use unicode_normalization::UnicodeNormalization;

/// Punctuation signs split off into standalone tokens at word edges.
const EDGE_PUNCTUATION: [char; 8] = ['.', '!', '?', '…', ',', ';', ':', '"'];

/// Punctuation that graphically ends a sentence.
pub fn is_sentence_final(text: &str) -> bool {
    matches!(text, "." | "!" | "?" | "…")
}

fn is_edge_punct(c: char) -> bool {
    EDGE_PUNCTUATION.contains(&c)
}

fn is_dash(c: char) -> bool {
    matches!(c, '-' | '‐' | '–' | '—')
}

/// Collapses runs of two or more dots into a single ellipsis character.
fn normalize_ellipses(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut dots = 0usize;
    for c in text.chars() {
        if c == '.' {
            dots += 1;
            continue;
        }
        match dots {
            0 => {}
            1 => out.push('.'),
            _ => out.push('…'),
        }
        dots = 0;
        out.push(c);
    }
    match dots {
        0 => {}
        1 => out.push('.'),
        _ => out.push('…'),
    }
    out
}

/// Splits text into tokens: whitespace-separated words with sentence
/// punctuation peeled off the edges into standalone punctuation tokens.
/// Intra-word apostrophes and hyphens stay inside the word. The text is
/// NFC-normalized and `...` becomes the single token `…`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let normalized = normalize_ellipses(&text.nfc().collect::<String>());
    let mut tokens = Vec::new();
    for chunk in normalized.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut lo = 0;
        let mut hi = chars.len();
        while lo < hi && is_edge_punct(chars[lo]) {
            lo += 1;
        }
        while hi > lo && is_edge_punct(chars[hi - 1]) {
            hi -= 1;
        }
        for &c in &chars[..lo] {
            tokens.push(Token::punctuation(c.to_string()));
        }
        if lo < hi {
            tokens.push(Token::word(chars[lo..hi].iter().collect::<String>()));
        }
        for &c in &chars[hi..] {
            tokens.push(Token::punctuation(c.to_string()));
        }
    }
    tokens
}

/// A cue reduced to its spoken content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanCue {
    pub start: TimeMs,
    pub end: TimeMs,
    pub tokens: Vec<Token>,
    /// Token indices where a dialogue dash marked a speaker change; a break
    /// at 0 means the cue opens with a new speaker.
    pub speaker_breaks: Vec<usize>,
}

impl CleanCue {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn remove_tag_spans(line: &str, open: char, close: char) -> String {
    let mut out = String::with_capacity(line.len());
    let mut rest = line;
    while let Some(start) = rest.find(open) {
        out.push_str(&rest[..start]);
        match rest[start..].find(close) {
            Some(rel) => rest = &rest[start + rel + close.len_utf8()..],
            None => return out, // unterminated tag: drop to end of line
        }
    }
    out.push_str(rest);
    out
}

fn is_whole_line_caption(line: &str) -> bool {
    let line = line.trim();
    (line.starts_with('[') && line.ends_with(']'))
        || (line.starts_with('(') && line.ends_with(')'))
        || (line.starts_with('♪') && line.ends_with('♪'))
}

/// True for `WALT:`-style prefixes naming an off-screen speaker: everything
/// before the colon is upper-case (no lowercase letters, at least one
/// uppercase), short enough to be a name.
fn speaker_prefix_len(line: &str) -> Option<usize> {
    let colon = line.find(':')?;
    let prefix = &line[..colon];
    if prefix.is_empty() || prefix.chars().count() > 24 {
        return None;
    }
    let has_upper = prefix.chars().any(|c| c.is_uppercase());
    let no_lower = prefix.chars().all(|c| !c.is_lowercase());
    (has_upper && no_lower).then_some(colon + 1)
}

/// Strips formatting tags, whole-line sound captions, speaker-name prefixes
/// and dialogue dashes from a cue, recording where dashes split speakers.
pub fn strip_markup(cue: &SubtitleCue) -> CleanCue {
    let mut tokens: Vec<Token> = Vec::new();
    let mut speaker_breaks: Vec<usize> = Vec::new();

    for raw in &cue.lines {
        let line = remove_tag_spans(raw, '<', '>');
        let line = remove_tag_spans(&line, '{', '}');
        let line = line.trim();
        if line.is_empty() || is_whole_line_caption(line) {
            continue;
        }

        let mut line = line;
        if line.starts_with(is_dash) {
            speaker_breaks.push(tokens.len());
            line = line.trim_start_matches(is_dash).trim_start();
        }
        if let Some(skip) = speaker_prefix_len(line) {
            line = line[skip..].trim_start();
        }

        for chunk in line.split_whitespace() {
            if !chunk.is_empty() && chunk.chars().all(is_dash) {
                // A standalone dash continues dialogue after a finished
                // sentence (speaker change) but is a hesitation mark
                // elsewhere; only the former splits.
                match tokens.last() {
                    None => speaker_breaks.push(0),
                    Some(prev)
                        if prev.kind == TokenKind::Punctuation && is_sentence_final(&prev.text) =>
                    {
                        speaker_breaks.push(tokens.len());
                    }
                    Some(_) => tokens.extend(tokenize(chunk)),
                }
                continue;
            }
            tokens.extend(tokenize(chunk));
        }
    }

    speaker_breaks.dedup();
    speaker_breaks.retain(|&i| i < tokens.len());
    CleanCue {
        start: cue.start,
        end: cue.end,
        tokens,
        speaker_breaks,
    }
}
