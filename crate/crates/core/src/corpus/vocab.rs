use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SentenceId, TokenizedDoc};
use crate::error::{Error, Result};

/// Dense term index, assigned in lexicographic term order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    counts: Vec<u64>,
}

impl Vocabulary {
    /// Build from `(term, count)` pairs; terms are sorted and deduplicated by
    /// summing their counts.
    pub fn from_counts(pairs: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (t, c) in pairs {
            *merged.entry(t).or_default() += c;
        }
        let (terms, counts) = merged.into_iter().unzip();
        Self { terms, counts }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.terms
            .binary_search_by(|t| t.as_str().cmp(term))
            .ok()
            .map(|i| i as u32)
    }

    pub fn term(&self, index: u32) -> &str {
        &self.terms[index as usize]
    }

    pub fn count(&self, index: u32) -> u64 {
        self.counts[index as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// `term<TAB>index<TAB>count` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, (t, c)) in self.terms.iter().zip(&self.counts).enumerate() {
            let _ = writeln!(out, "{t}\t{i}\t{c}");
        }
        out
    }
}

pub fn read_vocab_tsv(path: &Path) -> Result<Vocabulary> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut terms = Vec::new();
    let mut counts = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        let [term, index, count] = fields[..] else {
            return Err(Error::format(path, line_no + 1, "expected term<TAB>index<TAB>count"));
        };
        if index.parse::<usize>().ok() != Some(terms.len()) {
            return Err(Error::format(path, line_no + 1, "indices must be dense and ordered"));
        }
        let count = count
            .parse()
            .map_err(|_| Error::format(path, line_no + 1, "bad count"))?;
        terms.push(term.to_string());
        counts.push(count);
    }
    Ok(Vocabulary { terms, counts })
}

/// A document encoded against a vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedDoc {
    pub sentence_id: SentenceId,
    pub ids: Vec<u32>,
}

/// Keep terms whose corpus frequency lies in `[min_count, max_count]` and
/// encode every document against the surviving vocabulary. Documents left
/// without tokens are returned empty, in input order.
pub fn build_vocab(docs: &[TokenizedDoc], min_count: u64, max_count: u64) -> Result<(Vocabulary, Vec<EncodedDoc>)> {
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in docs {
        for t in &doc.tokens {
            *freq.entry(t.as_str()).or_default() += 1;
        }
    }
    let vocab = Vocabulary::from_counts(
        freq.into_iter()
            .filter(|&(_, c)| (min_count..=max_count).contains(&c))
            .map(|(t, c)| (t.to_string(), c)),
    );
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let encoded = docs
        .iter()
        .map(|doc| EncodedDoc {
            sentence_id: doc.sentence_id,
            ids: doc.tokens.iter().filter_map(|t| vocab.index_of(t)).collect(),
        })
        .collect();
    Ok((vocab, encoded))
}
