//! Deterministic synthetic corpora: annotated episodes, matching SRT
//! subtitle files (with optional subtitle-only noise), and controlled
//! perturbations with exact injected counts. Everything is driven by a
//! seeded ChaCha stream so fixtures are reproducible bit for bit.

pub mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turnkit::model::{Episode, Scene, Shot, SpeechTurn, TimeMs, Token, TokenKind};

const CAST: [&str; 12] = [
    "alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi", "ivan", "judy", "kevin",
    "lucy",
];

const CAPTIONS: [&str; 4] = [
    "[door slams]",
    "(sighs)",
    "[thunder rumbling]",
    "(phone buzzing)",
];

/// Corpus shape knobs; see [`synth_corpus`].
#[derive(Clone, Debug)]
pub struct SynthOptions {
    pub series: String,
    pub seasons: u32,
    pub episodes_per_season: usize,
    /// Inclusive token budget range per episode (words and punctuation).
    pub tokens_per_episode: (usize, usize),
    pub vocabulary: usize,
    pub with_addressees: bool,
    pub with_scenes: bool,
    pub with_shots: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            series: "demo".into(),
            seasons: 1,
            episodes_per_season: 4,
            tokens_per_episode: (800, 1200),
            vocabulary: 3000,
            with_addressees: false,
            with_scenes: false,
            with_shots: false,
        }
    }
}

/// Distinct lowercase words, a few with apostrophes.
pub fn vocabulary(size: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut words = std::collections::HashSet::with_capacity(size);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let len = rng.gen_range(2..=9);
        let mut word: String = (0..len)
            .map(|_| rng.gen_range(b'a'..=b'z') as char)
            .collect();
        if len > 4 && rng.gen_bool(0.05) {
            word.insert(len / 2, '\'');
        }
        if words.insert(word.clone()) {
            out.push(word);
        }
    }
    out
}

fn pick_word<'a>(vocab: &'a [String], rng: &mut ChaCha8Rng) -> &'a str {
    // Cubing the uniform draw front-loads the vocabulary, Zipf-like.
    let u: f64 = rng.gen();
    let idx = ((u * u * u) * vocab.len() as f64) as usize;
    &vocab[idx.min(vocab.len() - 1)]
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

fn sentence_tokens(vocab: &[String], rng: &mut ChaCha8Rng) -> Vec<Token> {
    let words = rng.gen_range(3..=18);
    let mut tokens = Vec::with_capacity(words + 3);
    for w in 0..words {
        let word = pick_word(vocab, rng);
        let word = if w == 0 {
            capitalize(word)
        } else {
            word.to_string()
        };
        tokens.push(Token::word(word));
        if w + 1 < words && rng.gen_bool(0.08) {
            tokens.push(Token::punctuation(","));
        }
    }
    let end = match rng.gen_range(0..10) {
        0 => "!",
        1 => "?",
        _ => ".",
    };
    tokens.push(Token::punctuation(end));
    tokens
}

fn synth_episode(
    opts: &SynthOptions,
    season: u32,
    episode: u32,
    vocab: &[String],
    rng: &mut ChaCha8Rng,
) -> Episode {
    let budget = rng.gen_range(opts.tokens_per_episode.0..=opts.tokens_per_episode.1);
    let mut turns = Vec::new();
    let mut clock_ms: u64 = rng.gen_range(5_000..20_000);
    let mut tokens_so_far = 0usize;
    while tokens_so_far < budget {
        let tokens = sentence_tokens(vocab, rng);
        let speaker_idx = {
            let u: f64 = rng.gen();
            ((u * u) * CAST.len() as f64) as usize
        };
        let duration_ms = (tokens.len() as u64 * 280).max(700) + rng.gen_range(0..400);
        let addressees = if opts.with_addressees {
            if rng.gen_bool(0.1) {
                Some(vec![])
            } else {
                let other = (speaker_idx + rng.gen_range(1..CAST.len())) % CAST.len();
                Some(vec![CAST[other].to_string()])
            }
        } else {
            None
        };
        tokens_so_far += tokens.len();
        turns.push(SpeechTurn {
            start: TimeMs(clock_ms),
            end: TimeMs(clock_ms + duration_ms),
            speaker: CAST[speaker_idx.min(CAST.len() - 1)].to_string(),
            addressees,
            tokens,
        });
        clock_ms += duration_ms + rng.gen_range(200..2_500);
    }
    let duration = TimeMs(clock_ms + 30_000);

    let scenes = opts.with_scenes.then(|| {
        let mut scenes = Vec::new();
        let mut at = 0u64;
        while at < duration.as_millis() {
            let len = rng
                .gen_range(30_000..240_000)
                .min(duration.as_millis() - at);
            if len < 5_000 {
                break;
            }
            scenes.push(Scene {
                start: TimeMs(at),
                end: TimeMs(at + len),
            });
            at += len;
        }
        scenes
    });

    let shots = opts.with_shots.then(|| {
        let mut shots = Vec::new();
        let mut at = 0u64;
        let mut cluster = 0u32;
        while at < duration.as_millis() {
            let len = rng.gen_range(2_000..8_000).min(duration.as_millis() - at);
            if len < 500 {
                break;
            }
            // Alternating pairs, like reverse-angle dialogue coverage.
            let label = cluster + rng.gen_range(0..2);
            shots.push(Shot {
                start: TimeMs(at),
                end: TimeMs(at + len),
                recurring_cluster: Some(label),
            });
            at += len;
            if rng.gen_bool(0.12) {
                cluster += 2;
            }
        }
        shots
    });

    Episode {
        series: opts.series.clone(),
        season,
        episode,
        duration,
        encrypted: false,
        digits: None,
        turns,
        scenes,
        shots,
    }
}

/// Generates a whole corpus; `seed` pins every choice.
pub fn synth_corpus(opts: &SynthOptions, seed: u64) -> Vec<Episode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = vocabulary(opts.vocabulary, &mut rng);
    let mut episodes = Vec::new();
    for season in 1..=opts.seasons {
        for number in 1..=opts.episodes_per_season {
            episodes.push(synth_episode(opts, season, number as u32, &vocab, &mut rng));
        }
    }
    episodes
}

/// Renders tokens to display text: words joined by spaces, punctuation
/// attached to the preceding word. Tokenizing the result gives the tokens
/// back, which is what keeps synthetic subtitles lossless.
pub fn render_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for token in tokens {
        if token.kind == TokenKind::Word && !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&token.text);
    }
    out
}

/// Subtitle rendering knobs.
#[derive(Clone, Copy, Debug, Default)]
pub struct SrtOptions {
    /// Sprinkle subtitle-only insertions that markup stripping removes:
    /// italics tags, caption cues, speaker-name prefixes, dialogue dashes.
    pub markup_noise: bool,
}

/// Exact counts of injected subtitle perturbations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PerturbOutcome {
    pub deleted: usize,
    pub substituted: usize,
}

/// Deletes and case-flips word tokens in place, spreading both over the
/// whole episode. Counts are exact: `round(frac * word_count)` each.
pub fn perturb_turn_tokens(
    turn_tokens: &mut [Vec<Token>],
    delete_frac: f64,
    sub_frac: f64,
    rng: &mut ChaCha8Rng,
) -> PerturbOutcome {
    let mut word_positions: Vec<(usize, usize)> = Vec::new();
    for (t, tokens) in turn_tokens.iter().enumerate() {
        for (i, token) in tokens.iter().enumerate() {
            if token.kind == TokenKind::Word {
                word_positions.push((t, i));
            }
        }
    }
    // Fisher-Yates so deletions and substitutions never collide.
    for i in (1..word_positions.len()).rev() {
        word_positions.swap(i, rng.gen_range(0..=i));
    }
    let n = word_positions.len();
    let deletions = (delete_frac * n as f64).round() as usize;
    let substitutions = (sub_frac * n as f64).round() as usize;

    let mut delete_at: Vec<(usize, usize)> = word_positions[..deletions.min(n)].to_vec();
    for &(t, i) in &word_positions[deletions.min(n)..(deletions + substitutions).min(n)] {
        let text = &mut turn_tokens[t][i].text;
        let flipped = if text.chars().next().is_some_and(|c| c.is_lowercase()) {
            capitalize(text)
        } else {
            text.to_lowercase()
        };
        *text = flipped;
    }
    // Delete from the back of each turn so earlier indices stay valid.
    delete_at.sort_by(|a, b| b.cmp(a));
    for (t, i) in &delete_at {
        turn_tokens[*t].remove(*i);
    }
    PerturbOutcome {
        deleted: deletions.min(n),
        substituted: (deletions + substitutions).min(n) - deletions.min(n),
    }
}

struct CueDraft {
    start: TimeMs,
    end: TimeMs,
    lines: Vec<String>,
}

/// Renders turn token lists into an SRT file. Cue boundaries intentionally
/// disagree with turn boundaries: long turns split across two cues and
/// short adjacent turns merge into one dash-marked cue.
pub fn tokens_to_srt(
    spans: &[(TimeMs, TimeMs)],
    turn_tokens: &[Vec<Token>],
    opts: &SrtOptions,
    rng: &mut ChaCha8Rng,
) -> String {
    assert_eq!(spans.len(), turn_tokens.len());
    let mut drafts: Vec<CueDraft> = Vec::new();
    let mut t = 0;
    while t < turn_tokens.len() {
        let tokens = &turn_tokens[t];
        if tokens.is_empty() {
            t += 1;
            continue;
        }
        let (start, end) = spans[t];
        let merge_next = opts.markup_noise
            && t + 1 < turn_tokens.len()
            && tokens.len() <= 8
            && !turn_tokens[t + 1].is_empty()
            && turn_tokens[t + 1].len() <= 8
            && rng.gen_bool(0.25);
        if merge_next {
            drafts.push(CueDraft {
                start,
                end: spans[t + 1].1,
                lines: vec![
                    format!("- {}", render_tokens(tokens)),
                    format!("- {}", render_tokens(&turn_tokens[t + 1])),
                ],
            });
            t += 2;
            continue;
        }
        if tokens.len() > 12 {
            let mid = tokens.len() / 2;
            let span = start.until(end);
            let cut = TimeMs(start.as_millis() + span * mid as u64 / tokens.len() as u64);
            drafts.push(CueDraft {
                start,
                end: cut,
                lines: vec![render_tokens(&tokens[..mid])],
            });
            drafts.push(CueDraft {
                start: cut,
                end,
                lines: vec![render_tokens(&tokens[mid..])],
            });
        } else {
            drafts.push(CueDraft {
                start,
                end,
                lines: vec![render_tokens(tokens)],
            });
        }
        t += 1;
    }

    if opts.markup_noise {
        let mut with_noise: Vec<CueDraft> = Vec::new();
        for draft in drafts {
            let gap_before = with_noise.last().map(|p: &CueDraft| p.end);
            if let Some(prev_end) = gap_before {
                if draft.start.as_millis() > prev_end.as_millis() + 600 && rng.gen_bool(0.06) {
                    with_noise.push(CueDraft {
                        start: TimeMs(prev_end.as_millis() + 100),
                        end: TimeMs(draft.start.as_millis() - 100),
                        lines: vec![CAPTIONS[rng.gen_range(0..CAPTIONS.len())].to_string()],
                    });
                }
            }
            let mut draft = draft;
            if rng.gen_bool(0.10) {
                draft.lines = draft.lines.iter().map(|l| format!("<i>{l}</i>")).collect();
            } else if rng.gen_bool(0.05) {
                let name = CAST[rng.gen_range(0..CAST.len())].to_uppercase();
                draft.lines.insert(0, format!("{name}:"));
            }
            with_noise.push(draft);
        }
        drafts = with_noise;
    }

    let cues: Vec<turnkit::srt::SubtitleCue> = drafts
        .into_iter()
        .enumerate()
        .map(|(i, d)| turnkit::srt::SubtitleCue {
            index: i as u32 + 1,
            start: d.start,
            end: d.end,
            lines: d.lines,
        })
        .collect();
    turnkit::srt::serialize_srt(&cues)
}

/// SRT text faithful to an episode, optionally with markup noise.
pub fn episode_to_srt(episode: &Episode, opts: &SrtOptions, rng: &mut ChaCha8Rng) -> String {
    let spans: Vec<(TimeMs, TimeMs)> = episode.turns.iter().map(|t| (t.start, t.end)).collect();
    let tokens: Vec<Vec<Token>> = episode.turns.iter().map(|t| t.tokens.clone()).collect();
    tokens_to_srt(&spans, &tokens, opts, rng)
}
