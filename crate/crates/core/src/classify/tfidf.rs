use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{TokenizedDoc, Vocabulary};
use crate::error::{Error, Result};

/// Sparse feature vector with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVec {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl SparseVec {
    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .unzip();
        Self { indices, values }
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| dense[i as usize] * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }
}

impl AsRef<[String]> for TokenizedDoc {
    fn as_ref(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    #[default]
    L2,
}

/// Vocabulary (with document frequencies as counts) and smoothed IDF weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pub vocabulary: Vocabulary,
    pub idf: Vec<f64>,
    pub norm: Norm,
}

/// Fit `idf[t] = ln((1 + N) / (1 + df_t)) + 1` over all terms of the corpus.
pub fn fit_tfidf<D: AsRef<[String]>>(docs: &[D]) -> Result<TfidfModel> {
    if docs.is_empty() {
        return Err(Error::InvalidInput("cannot fit TF-IDF on an empty corpus".into()));
    }
    let mut df: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in docs {
        let distinct: BTreeSet<&str> = doc.as_ref().iter().map(String::as_str).collect();
        for t in distinct {
            *df.entry(t).or_default() += 1;
        }
    }
    if df.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let n = docs.len() as f64;
    let vocabulary = Vocabulary::from_counts(df.into_iter().map(|(t, c)| (t.to_string(), c)));
    let idf = (0..vocabulary.len() as u32)
        .map(|i| ((1.0 + n) / (1.0 + vocabulary.count(i) as f64)).ln() + 1.0)
        .collect();
    Ok(TfidfModel {
        vocabulary,
        idf,
        norm: Norm::L2,
    })
}

impl TfidfModel {
    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    /// Raw term counts times IDF, L2-normalized. Unknown terms are ignored;
    /// an all-zero vector is returned unnormalized.
    pub fn transform(&self, tokens: &[String]) -> SparseVec {
        let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
        for t in tokens {
            if let Some(i) = self.vocabulary.index_of(t) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        self.weigh(counts)
    }

    /// Same as [`transform`](Self::transform) for pre-counted terms.
    pub fn transform_counts(&self, counts: &BTreeMap<String, f64>) -> SparseVec {
        let mut by_index = BTreeMap::new();
        for (t, c) in counts {
            if let Some(i) = self.vocabulary.index_of(t) {
                by_index.insert(i, *c);
            }
        }
        self.weigh(by_index)
    }

    fn weigh(&self, counts: BTreeMap<u32, f64>) -> SparseVec {
        let mut v = SparseVec {
            indices: Vec::with_capacity(counts.len()),
            values: Vec::with_capacity(counts.len()),
        };
        for (i, tf) in counts {
            v.indices.push(i);
            v.values.push(tf * self.idf[i as usize]);
        }
        let norm = v.norm();
        if norm > 0.0 {
            v.values.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    pub fn transform_all<D: AsRef<[String]>>(&self, docs: &[D]) -> Vec<SparseVec> {
        docs.iter().map(|d| self.transform(d.as_ref())).collect()
    }
}
