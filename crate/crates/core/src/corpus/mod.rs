//! Sentences and the two preprocessing profiles built on them.

mod segment;
mod tokenize;
mod vocab;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ingest::{Post, PostId};

pub use segment::{segment_sentences, segment_text};
pub use tokenize::{lemmatize, tokenize, Profile, TokenizedDoc, Tokenizer, DEFAULT_MIN_TOKEN_LEN, STOPWORDS_EN};
pub use vocab::{build_vocab, read_vocab_tsv, EncodedDoc, Vocabulary};

/// `postId-seq`, where `seq` is the 0-based position of the sentence in its post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceId {
    pub post: PostId,
    pub seq: u32,
}

impl SentenceId {
    pub fn new(post: PostId, seq: u32) -> Self {
        Self { post, seq }
    }
}

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.post, self.seq)
    }
}

impl FromStr for SentenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed sentence id `{s}`"));
        let (post, seq) = s.trim().split_once('-').ok_or_else(bad)?;
        Ok(Self {
            post: post.parse().map_err(|_| bad())?,
            seq: seq.parse().map_err(|_| bad())?,
        })
    }
}

impl Serialize for SentenceId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SentenceId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: SentenceId,
    pub post_id: PostId,
    pub text: String,
    pub created_at: DateTime<Utc>,
    pub tags: Vec<String>,
    pub is_question: bool,
}

/// Segment every post, preserving post order.
pub fn sentences_from_posts(posts: &[Post]) -> Vec<Sentence> {
    use rayon::prelude::*;
    posts
        .par_iter()
        .map(segment_sentences)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn write_sentences(path: &Path, sentences: &[Sentence]) -> Result<()> {
    crate::io::write_jsonl(path, sentences)
}

pub fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    let sentences: Vec<Sentence> = crate::io::read_jsonl(path)?;
    let mut seen = std::collections::HashSet::with_capacity(sentences.len());
    for s in &sentences {
        if !seen.insert(s.id) {
            return Err(Error::DuplicateId(s.id.to_string()));
        }
    }
    Ok(sentences)
}
