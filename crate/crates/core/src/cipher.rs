//! Deterministic truncated-hash encryption of token sequences.
//!
//! Each token (punctuation signs included) is replaced by the first hex
//! digits of the SHA-256 of its NFC UTF-8 bytes, case-sensitively. The
//! truncation (3 digits by default, a 4,096-code space) produces collisions
//! on purpose: they blunt dictionary attacks, and recovery tolerates them
//! because colliding words almost never sit close enough to create an
//! ambiguous subsequence.

use crate::model::{Episode, Token};
use sha2::{Digest, Sha256};
use std::fmt;
use thiserror::Error;
use unicode_normalization::{is_nfc, UnicodeNormalization};

/// Default number of hex digits kept per code.
pub const DEFAULT_DIGITS: usize = 3;
/// A full SHA-256 digest in hex digits.
pub const MAX_DIGITS: usize = 64;

/// A truncated lowercase-hex digest standing in for one token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(String);

impl Code {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CipherError {
    #[error("cannot encrypt an empty token")]
    EmptyToken,
    #[error("digits must be between 1 and {MAX_DIGITS}, got {0}")]
    BadDigits(usize),
    #[error("episode is already encrypted")]
    AlreadyEncrypted,
}

fn check_digits(digits: usize) -> Result<(), CipherError> {
    if (1..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(CipherError::BadDigits(digits))
    }
}

/// Encrypts one token text: first `digits` lowercase hex digits of the
/// SHA-256 of its NFC UTF-8 bytes. Deterministic and case-sensitive.
/// Annotation files and subtitle text must hash identically, so the NFC
/// form is enforced here rather than trusted from the caller.
pub fn encrypt_token(text: &str, digits: usize) -> Result<Code, CipherError> {
    check_digits(digits)?;
    if text.is_empty() {
        return Err(CipherError::EmptyToken);
    }
    let digest = if is_nfc(text) {
        Sha256::digest(text.as_bytes())
    } else {
        Sha256::digest(text.nfc().collect::<String>().as_bytes())
    };
    let mut hex = String::with_capacity(digits);
    for byte in digest.iter() {
        for nibble in [byte >> 4, byte & 0xf] {
            hex.push(char::from_digit(nibble as u32, 16).unwrap());
            if hex.len() == digits {
                return Ok(Code(hex));
            }
        }
    }
    unreachable!("SHA-256 yields 64 hex digits")
}

/// Encrypts every token of a clear episode in place of its text, leaving
/// all boundaries, speakers and optional layers untouched.
pub fn encrypt_episode(episode: &Episode, digits: usize) -> Result<Episode, CipherError> {
    check_digits(digits)?;
    if episode.encrypted {
        return Err(CipherError::AlreadyEncrypted);
    }
    let mut out = episode.clone();
    for turn in &mut out.turns {
        for token in &mut turn.tokens {
            token.text = encrypt_token(&token.text, digits)?.into_string();
        }
    }
    out.encrypted = true;
    out.digits = Some(digits as u8);
    Ok(out)
}

/// Encrypts a token list, pairing each clear token with its code.
pub fn encrypt_tokens(tokens: &[Token], digits: usize) -> Result<Vec<(Token, Code)>, CipherError> {
    tokens
        .iter()
        .map(|t| Ok((t.clone(), encrypt_token(&t.text, digits)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SpeechTurn, TimeMs};

    // Reference digests computed with an independent SHA-256 implementation.
    const SHA_HELLO: &str = "2cf24dba5fb0a30e26e83b2ac5b9e29e1b161e5c1fa7425e73043362938b9824";
    const SHA_HELLO_CAP: &str = "185f8db32271fe25f561a6fc938b2e264306ec304eda518007d1764826381969";

    #[test]
    fn golden_truncated_digests() {
        assert_eq!(encrypt_token("hello", 3).unwrap().as_str(), "2cf");
        assert_eq!(encrypt_token("Hello", 3).unwrap().as_str(), "185");
        assert_eq!(encrypt_token("I'm", 3).unwrap().as_str(), "c9d");
        assert_eq!(encrypt_token(".", 3).unwrap().as_str(), "cdb");
        assert_eq!(encrypt_token("Why", 3).unwrap().as_str(), "d3a");
    }

    #[test]
    fn full_hash_matches_reference() {
        assert_eq!(encrypt_token("hello", 64).unwrap().as_str(), SHA_HELLO);
        assert_eq!(encrypt_token("Hello", 64).unwrap().as_str(), SHA_HELLO_CAP);
    }

    #[test]
    fn case_matters() {
        assert_ne!(
            encrypt_token("hello", 3).unwrap(),
            encrypt_token("Hello", 3).unwrap()
        );
    }

    #[test]
    fn determinism() {
        assert_eq!(
            encrypt_token("recurrence", 3).unwrap(),
            encrypt_token("recurrence", 3).unwrap()
        );
    }

    #[test]
    fn empty_token_is_an_error() {
        assert_eq!(encrypt_token("", 3), Err(CipherError::EmptyToken));
    }

    #[test]
    fn composed_and_decomposed_forms_hash_identically() {
        // "é" as U+00E9 vs "e" + U+0301.
        assert_eq!(
            encrypt_token("caf\u{e9}", 8).unwrap(),
            encrypt_token("cafe\u{301}", 8).unwrap()
        );
    }

    #[test]
    fn digits_out_of_range_rejected() {
        assert_eq!(encrypt_token("x", 0), Err(CipherError::BadDigits(0)));
        assert_eq!(encrypt_token("x", 65), Err(CipherError::BadDigits(65)));
    }

    fn sample_episode() -> Episode {
        Episode {
            series: "demo".into(),
            season: 1,
            episode: 1,
            duration: TimeMs(10_000),
            encrypted: false,
            digits: None,
            turns: vec![SpeechTurn {
                start: TimeMs(0),
                end: TimeMs(1500),
                speaker: "walt".into(),
                addressees: Some(vec!["jesse".into()]),
                tokens: vec![
                    Token::word("hello"),
                    Token::word("Hello"),
                    Token::punctuation("."),
                ],
            }],
            scenes: None,
            shots: None,
        }
    }

    #[test]
    fn episode_encryption_preserves_structure() {
        let clear = sample_episode();
        let enc = encrypt_episode(&clear, 3).unwrap();
        assert!(enc.encrypted);
        assert_eq!(enc.digits, Some(3));
        assert_eq!(enc.turns.len(), 1);
        let turn = &enc.turns[0];
        assert_eq!(turn.start, clear.turns[0].start);
        assert_eq!(turn.end, clear.turns[0].end);
        assert_eq!(turn.speaker, clear.turns[0].speaker);
        assert_eq!(turn.addressees, clear.turns[0].addressees);
        let codes: Vec<&str> = turn.tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(codes, vec!["2cf", "185", "cdb"]);
        assert_eq!(turn.tokens[2].kind, clear.turns[0].tokens[2].kind);
    }

    #[test]
    fn empty_episode_encrypts_to_itself_with_flag() {
        let mut clear = sample_episode();
        clear.turns.clear();
        let enc = encrypt_episode(&clear, 3).unwrap();
        assert!(enc.encrypted);
        assert!(enc.turns.is_empty());
    }

    #[test]
    fn double_encryption_is_rejected() {
        let enc = encrypt_episode(&sample_episode(), 3).unwrap();
        assert_eq!(encrypt_episode(&enc, 3), Err(CipherError::AlreadyEncrypted));
    }
}
