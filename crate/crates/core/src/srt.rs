//! SRT subtitle parsing and serialization.
//!
//! Accepts UTF-8 input (optionally BOM-prefixed), CRLF or LF line endings,
//! and a missing trailing newline. Timestamps are `HH:MM:SS,mmm`; a `.`
//! millisecond separator is tolerated on input, `,` is always written.

use crate::model::TimeMs;
use thiserror::Error;

/// One timed block of an SRT file, text kept as raw lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtitleCue {
    pub index: u32,
    pub start: TimeMs,
    pub end: TimeMs,
    pub lines: Vec<String>,
}

#[derive(Debug, Error)]
pub enum SrtError {
    #[error("subtitle file is not valid UTF-8 (byte offset {offset})")]
    NotUtf8 { offset: usize },
    #[error("line {line}: expected a numeric cue index, found {found:?}")]
    BadIndex { line: usize, found: String },
    #[error("line {line}: malformed timestamp line {found:?}")]
    BadTimestamp { line: usize, found: String },
    #[error("line {line}: cue end is not after its start")]
    EndBeforeStart { line: usize },
    #[error("line {line}: cue is missing its timestamp line")]
    MissingTimestamp { line: usize },
}

fn parse_timestamp(text: &str) -> Option<TimeMs> {
    let (hms, millis) = match text.rsplit_once([',', '.']) {
        Some((h, m)) => (h, m),
        None => return None,
    };
    if millis.len() != 3 || !millis.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut parts = hms.split(':');
    let hours: u64 = parts.next()?.trim().parse().ok()?;
    let minutes: u64 = parts.next()?.parse().ok()?;
    let seconds: u64 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || minutes >= 60 || seconds >= 60 {
        return None;
    }
    let ms: u64 = millis.parse().ok()?;
    Some(TimeMs(((hours * 60 + minutes) * 60 + seconds) * 1000 + ms))
}

fn format_timestamp(t: TimeMs) -> String {
    let ms = t.as_millis();
    format!(
        "{:02}:{:02}:{:02},{:03}",
        ms / 3_600_000,
        ms / 60_000 % 60,
        ms / 1000 % 60,
        ms % 1000
    )
}

/// Parses SRT bytes into cues sorted by start time.
pub fn parse_srt(bytes: &[u8]) -> Result<Vec<SubtitleCue>, SrtError> {
    let text = std::str::from_utf8(bytes).map_err(|e| SrtError::NotUtf8 {
        offset: e.valid_up_to(),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    let mut cues = Vec::new();
    let mut pos = 0usize;
    while pos < lines.len() {
        if lines[pos].trim().is_empty() {
            pos += 1;
            continue;
        }
        let index_line = pos;
        let index: u32 = lines[pos].trim().parse().map_err(|_| SrtError::BadIndex {
            line: index_line + 1,
            found: lines[pos].trim().to_string(),
        })?;
        pos += 1;
        let ts_line = lines
            .get(pos)
            .copied()
            .filter(|l| !l.trim().is_empty())
            .ok_or(SrtError::MissingTimestamp { line: pos + 1 })?;
        let (start, end) = ts_line
            .split_once("-->")
            .and_then(|(a, b)| Some((parse_timestamp(a.trim())?, parse_timestamp(b.trim())?)))
            .ok_or_else(|| SrtError::BadTimestamp {
                line: pos + 1,
                found: ts_line.to_string(),
            })?;
        if end <= start {
            return Err(SrtError::EndBeforeStart { line: pos + 1 });
        }
        pos += 1;
        let mut text_lines = Vec::new();
        while pos < lines.len() && !lines[pos].trim().is_empty() {
            text_lines.push(lines[pos].to_string());
            pos += 1;
        }
        cues.push(SubtitleCue {
            index,
            start,
            end,
            lines: text_lines,
        });
    }
    cues.sort_by_key(|c| c.start);
    Ok(cues)
}

/// Renders cues back to SRT text, one blank line between blocks.
pub fn serialize_srt(cues: &[SubtitleCue]) -> String {
    let mut out = String::new();
    for cue in cues {
        out.push_str(&cue.index.to_string());
        out.push('\n');
        out.push_str(&format_timestamp(cue.start));
        out.push_str(" --> ");
        out.push_str(&format_timestamp(cue.end));
        out.push('\n');
        for line in &cue.lines {
            out.push_str(line);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
