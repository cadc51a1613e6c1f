//! Toolkit for speaker-attributed transcript annotations of serial video.
//!
//! Annotation files carry timed, speaker-attributed speech turns (plus
//! optional scene and shot layers). Because transcript text is usually
//! copyrighted, the toolkit never ships it in the clear: token texts are
//! replaced by truncated SHA-256 codes ([`cipher`]), and anyone holding
//! matching subtitle files can restore the words by aligning the two
//! encrypted token streams ([`align`], [`recover`]). Recovery quality is
//! scored with word and sentence error rates ([`wer`]), and [`stats`]
//! computes corpus descriptives: coverage, duration power laws, lexical
//! diversity, speaker concentration, conversational networks.
//!
//! Everything is a pure function over immutable values; corpus-scale entry
//! points fan out per episode through [`exec`] (rayon when the `parallel`
//! feature is on, plain loops otherwise) and merge results in input order,
//! so outputs never depend on worker count.

pub mod align;
pub mod cipher;
pub mod corpus;
pub mod exec;
pub mod model;
pub mod recover;
pub mod segment;
pub mod srt;
pub mod stats;
pub mod text;
pub mod wer;

pub use model::{Episode, Scene, Shot, SpeechTurn, TimeMs, Token, TokenKind};
