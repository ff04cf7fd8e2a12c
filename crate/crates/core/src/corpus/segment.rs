//! Rule-based sentence boundary detection.
//!
//! A boundary follows a run of `.`, `!` or `?` (optionally followed by closing
//! quotes or brackets) when the run is followed by whitespace and the next
//! character is an uppercase letter, an opening quote or bracket, or a digit.
//! A run made only of periods does not split after a known abbreviation, a
//! capital-letter initial (`J.`), a dotted letters-only token (`U.S.`), or a
//! one- or two-digit list marker opening the text (`1.`). Periods inside a
//! token (`1.0.2`, `node.js`) are never followed by whitespace and so never
//! split.

use super::{Sentence, SentenceId};
use crate::ingest::Post;

// `etc.` is left out: it ends the sentence far more often than not when a
// capitalized word follows.
const ABBREVIATIONS: [&str; 29] = [
    "e.g", "i.e", "eg", "ie", "vs", "cf", "approx", "fig", "figs", "eq", "no", "nos", "mr", "mrs", "ms",
    "dr", "prof", "inc", "ltd", "jr", "sr", "st", "resp", "al", "ex", "viz", "esp", "p", "pp",
];

const CLOSERS: [char; 6] = ['"', '\'', ')', ']', '\u{201d}', '\u{2019}'];
const OPENERS: [char; 6] = ['"', '\'', '(', '[', '\u{201c}', '\u{2018}'];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Byte offsets at which a new sentence starts, excluding offset 0.
fn boundaries(text: &str) -> Vec<usize> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !is_terminal(chars[i].1) {
            i += 1;
            continue;
        }
        let run_start = i;
        let mut j = i;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        let run_end = j;
        while j < chars.len() && CLOSERS.contains(&chars[j].1) {
            j += 1;
        }
        i = run_end;

        let ws_start = j;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        if j == ws_start || j >= chars.len() {
            continue;
        }
        let next = chars[j].1;
        if !(next.is_uppercase() || next.is_ascii_digit() || OPENERS.contains(&next)) {
            continue;
        }
        let only_periods = chars[run_start..run_end].iter().all(|&(_, c)| c == '.');
        if only_periods && guarded(text, &chars, run_start) {
            continue;
        }
        out.push(chars[j].0);
    }
    out
}

/// True when the period run starting at `run_start` belongs to an
/// abbreviation, an initial, a dotted abbreviation or a leading list marker.
fn guarded(text: &str, chars: &[(usize, char)], run_start: usize) -> bool {
    let mut k = run_start;
    while k > 0 && !chars[k - 1].1.is_whitespace() {
        k -= 1;
    }
    let token_start = chars[k].0;
    let token_end = chars[run_start].0;
    let core = text[token_start..token_end].trim_start_matches(|c: char| OPENERS.contains(&c));
    if core.is_empty() {
        return false;
    }
    let lower = core.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    let mut it = core.chars();
    if let (Some(c), None) = (it.next(), it.next()) {
        if c.is_uppercase() {
            return true;
        }
    }
    if core.contains('.') && core.chars().all(|c| c == '.' || c.is_alphabetic()) {
        return true;
    }
    text[..token_start].trim().is_empty() && core.len() <= 2 && core.chars().all(|c| c.is_ascii_digit())
}

/// Split plain text into trimmed, non-empty sentences.
pub fn segment_text(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    for b in boundaries(text).into_iter().chain(std::iter::once(text.len())) {
        let piece = text[start..b].trim();
        if !piece.is_empty() {
            out.push(piece.to_string());
        }
        start = b;
    }
    out
}

/// Sentences of a post, numbered from 0 in reading order.
pub fn segment_sentences(post: &Post) -> Vec<Sentence> {
    segment_text(&post.body_text)
        .into_iter()
        .enumerate()
        .map(|(seq, text)| Sentence {
            id: SentenceId::new(post.id, seq as u32),
            post_id: post.id,
            text,
            created_at: post.created_at,
            tags: post.tags.clone(),
            is_question: post.is_question(),
        })
        .collect()
}
