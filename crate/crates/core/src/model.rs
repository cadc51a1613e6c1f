//! Domain types for annotated episodes: timed, speaker-attributed speech
//! turns plus optional scene and shot layers, with structural validation.
//!
//! Everything here is an immutable value after load; the operations are pure
//! functions, so distinct episodes can be processed in parallel freely.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Reserved speaker label for unidentified speech segments.
pub const UNKNOWN_SPEAKER: &str = "unknown";

/// A point in time measured in whole milliseconds from the episode start.
///
/// Annotation and subtitle formats carry millisecond precision; storing
/// integer milliseconds keeps comparisons exact and serialization stable.
/// Serialized as decimal seconds (e.g. `1.5`).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TimeMs(pub u64);

impl TimeMs {
    pub fn from_secs_f64(secs: f64) -> Option<Self> {
        if !secs.is_finite() || secs < 0.0 {
            return None;
        }
        Some(TimeMs((secs * 1000.0).round() as u64))
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn as_millis(self) -> u64 {
        self.0
    }

    /// Duration from `self` to `later`, zero if `later` precedes `self`.
    pub fn until(self, later: TimeMs) -> u64 {
        later.0.saturating_sub(self.0)
    }
}

impl fmt::Display for TimeMs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_secs_f64())
    }
}

impl Serialize for TimeMs {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_secs_f64())
    }
}

impl<'de> Deserialize<'de> for TimeMs {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let secs = f64::deserialize(deserializer)?;
        TimeMs::from_secs_f64(secs)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid time in seconds: {secs}")))
    }
}

/// Whether a token is a word or a standalone punctuation sign.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Punctuation,
}

/// One token of a speech turn.
///
/// In a clear episode `text` is the word or punctuation sign itself; in an
/// encrypted episode it is the truncated lowercase-hex digest standing in
/// for it. Recovered episodes may additionally carry the literal markers
/// `<>` (deleted) and `<word>` (substituted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn word(text: impl Into<String>) -> Self {
        Token {
            text: text.into(),
            kind: TokenKind::Word,
        }
    }

    pub fn punctuation(text: impl Into<String>) -> Self {
        Token {
            text: text.into(),
            kind: TokenKind::Punctuation,
        }
    }

    pub fn is_punctuation(&self) -> bool {
        self.kind == TokenKind::Punctuation
    }
}

/// A sentence-level utterance by a single speaker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeechTurn {
    pub start: TimeMs,
    pub end: TimeMs,
    pub speaker: String,
    /// `None` when the interlocutor layer was not annotated; an empty list
    /// marks a soliloquy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub addressees: Option<Vec<String>>,
    pub tokens: Vec<Token>,
}

impl SpeechTurn {
    pub fn duration_ms(&self) -> u64 {
        self.start.until(self.end)
    }

    pub fn duration_secs(&self) -> f64 {
        self.duration_ms() as f64 / 1000.0
    }

    pub fn midpoint(&self) -> TimeMs {
        TimeMs(self.start.0 + self.start.until(self.end) / 2)
    }
}

/// A homogeneous action unit: same place, continuous period of time.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub start: TimeMs,
    pub end: TimeMs,
}

impl Scene {
    pub fn duration_secs(&self) -> f64 {
        self.start.until(self.end) as f64 / 1000.0
    }
}

/// An unbroken sequence of frames taken from one camera. Shots sharing a
/// `recurring_cluster` label share the same framing.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shot {
    pub start: TimeMs,
    pub end: TimeMs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurring_cluster: Option<u32>,
}

impl Shot {
    pub fn duration_secs(&self) -> f64 {
        self.start.until(self.end) as f64 / 1000.0
    }
}

/// One annotated episode. This is the unit the on-disk JSON schema mirrors
/// field for field; reading and writing an episode is lossless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Episode {
    pub series: String,
    pub season: u32,
    pub episode: u32,
    pub duration: TimeMs,
    /// True when token texts are truncated-hash codes rather than words.
    #[serde(default)]
    pub encrypted: bool,
    /// Number of hex digits kept per code; present only on encrypted files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u8>,
    pub turns: Vec<SpeechTurn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenes: Option<Vec<Scene>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<Vec<Shot>>,
}

impl Episode {
    /// `SxxEyy` identifier, e.g. `S02E05`.
    pub fn key(&self) -> String {
        format!("S{:02}E{:02}", self.season, self.episode)
    }

    /// Total token count across all turns.
    pub fn token_count(&self) -> usize {
        self.turns.iter().map(|t| t.tokens.len()).sum()
    }
}

/// Identifies the annotation unit a validation rule fired on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "unit")]
pub enum UnitRef {
    Episode,
    Turn { index: usize },
    Token { turn: usize, token: usize },
    Scene { index: usize },
    Shot { index: usize },
}

/// Stable identifiers for the structural rules checked by [`validate_episode`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    StartNotBeforeEnd,
    OutOfOrder,
    Overlap,
    EmptyTokenList,
    EmptyToken,
    TokenWhitespace,
    BadCode,
    ExceedsDuration,
    BadOrdinal,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let id = match self {
            Rule::StartNotBeforeEnd => "start_not_before_end",
            Rule::OutOfOrder => "out_of_order",
            Rule::Overlap => "overlap",
            Rule::EmptyTokenList => "empty_token_list",
            Rule::EmptyToken => "empty_token",
            Rule::TokenWhitespace => "token_whitespace",
            Rule::BadCode => "bad_code",
            Rule::ExceedsDuration => "exceeds_duration",
            Rule::BadOrdinal => "bad_ordinal",
        };
        f.write_str(id)
    }
}

/// One violated rule, pointing at the offending unit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    #[serde(flatten)]
    pub unit: UnitRef,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.rule, self.unit, self.detail)
    }
}

/// Outcome of [`validate_episode`]; empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, unit: UnitRef, rule: Rule, detail: String) {
        self.violations.push(Violation { unit, rule, detail });
    }
}

fn is_valid_code(text: &str, digits: usize) -> bool {
    text.len() == digits
        && text
            .bytes()
            .all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

/// Checks every structural invariant of an episode and reports each
/// violation with the offending unit and rule id. Never mutates its input.
pub fn validate_episode(episode: &Episode) -> ValidationReport {
    let mut report = ValidationReport::default();
    let digits = episode.digits.unwrap_or(3) as usize;

    if episode.season < 1 {
        report.push(
            UnitRef::Episode,
            Rule::BadOrdinal,
            "season must be >= 1".into(),
        );
    }
    if episode.episode < 1 {
        report.push(
            UnitRef::Episode,
            Rule::BadOrdinal,
            "episode must be >= 1".into(),
        );
    }

    for (i, turn) in episode.turns.iter().enumerate() {
        if turn.start >= turn.end {
            report.push(
                UnitRef::Turn { index: i },
                Rule::StartNotBeforeEnd,
                format!("{} >= {}", turn.start, turn.end),
            );
        }
        if turn.end > episode.duration {
            report.push(
                UnitRef::Turn { index: i },
                Rule::ExceedsDuration,
                format!(
                    "turn ends at {} but episode lasts {}",
                    turn.end, episode.duration
                ),
            );
        }
        if turn.tokens.is_empty() {
            report.push(
                UnitRef::Turn { index: i },
                Rule::EmptyTokenList,
                "turn has no tokens".into(),
            );
        }
        for (j, token) in turn.tokens.iter().enumerate() {
            let unit = UnitRef::Token { turn: i, token: j };
            if episode.encrypted {
                if !is_valid_code(&token.text, digits) {
                    report.push(
                        unit,
                        Rule::BadCode,
                        format!(
                            "{:?} is not a {digits}-digit lowercase hex code",
                            token.text
                        ),
                    );
                }
            } else if token.text.is_empty() {
                report.push(unit, Rule::EmptyToken, "empty token text".into());
            } else if token.text.chars().any(char::is_whitespace) {
                report.push(
                    unit,
                    Rule::TokenWhitespace,
                    format!("{:?} contains whitespace", token.text),
                );
            }
        }
    }
    for (i, pair) in episode.turns.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if a.start > b.start {
            report.push(
                UnitRef::Turn { index: i },
                Rule::OutOfOrder,
                format!("turn {} starts after turn {}", i, i + 1),
            );
        } else if a.end > b.start {
            report.push(
                UnitRef::Turn { index: i },
                Rule::Overlap,
                format!("turn {} overlaps turn {}", i, i + 1),
            );
        }
    }

    if let Some(scenes) = &episode.scenes {
        for (i, scene) in scenes.iter().enumerate() {
            if scene.start >= scene.end {
                report.push(
                    UnitRef::Scene { index: i },
                    Rule::StartNotBeforeEnd,
                    format!("{} >= {}", scene.start, scene.end),
                );
            }
            if scene.end > episode.duration {
                report.push(
                    UnitRef::Scene { index: i },
                    Rule::ExceedsDuration,
                    "scene ends past episode".into(),
                );
            }
        }
        for (i, pair) in scenes.windows(2).enumerate() {
            if pair[0].start > pair[1].start {
                report.push(
                    UnitRef::Scene { index: i },
                    Rule::OutOfOrder,
                    "scenes not sorted".into(),
                );
            } else if pair[0].end > pair[1].start {
                report.push(
                    UnitRef::Scene { index: i },
                    Rule::Overlap,
                    format!("scene {} overlaps scene {}", i, i + 1),
                );
            }
        }
    }

    if let Some(shots) = &episode.shots {
        for (i, shot) in shots.iter().enumerate() {
            if shot.start >= shot.end {
                report.push(
                    UnitRef::Shot { index: i },
                    Rule::StartNotBeforeEnd,
                    format!("{} >= {}", shot.start, shot.end),
                );
            }
            if shot.end > episode.duration {
                report.push(
                    UnitRef::Shot { index: i },
                    Rule::ExceedsDuration,
                    "shot ends past episode".into(),
                );
            }
        }
        for (i, pair) in shots.windows(2).enumerate() {
            if pair[0].start > pair[1].start {
                report.push(
                    UnitRef::Shot { index: i },
                    Rule::OutOfOrder,
                    "shots not sorted".into(),
                );
            }
        }
    }

    report
}

/// Applies the overlap cut-off rule to turns sorted by start: whenever a
/// turn runs past the start of the next one, it is cut at that exact point;
/// turns whose duration drops to zero are removed.
///
/// Idempotent, never moves a start, never extends an end.
pub fn resolve_overlaps(turns: Vec<SpeechTurn>) -> Vec<SpeechTurn> {
    let mut out = Vec::with_capacity(turns.len());
    let starts: Vec<TimeMs> = turns.iter().map(|t| t.start).collect();
    for (i, mut turn) in turns.into_iter().enumerate() {
        if let Some(&next_start) = starts.get(i + 1) {
            if turn.end > next_start {
                turn.end = next_start;
            }
        }
        if turn.start < turn.end {
            out.push(turn);
        }
    }
    out
}
