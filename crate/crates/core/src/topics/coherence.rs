//! Topic coherence: c_v (sliding-window NPMI with indirect cosine similarity)
//! and UMass (document co-occurrence log-conditional probabilities).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TopicModel;
use crate::error::{Error, Result};

pub const DEFAULT_TOP_N: usize = 10;
pub const DEFAULT_WINDOW: usize = 110;
/// Additive smoothing applied to every probability entering NPMI.
pub const NPMI_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoherenceMetric {
    #[serde(rename = "c_v")]
    CV,
    #[serde(rename = "u_mass")]
    UMass,
}

impl fmt::Display for CoherenceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CV => "c_v",
            Self::UMass => "u_mass",
        })
    }
}

impl FromStr for CoherenceMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c_v" | "cv" => Ok(Self::CV),
            "u_mass" | "umass" => Ok(Self::UMass),
            other => Err(Error::InvalidInput(format!("unknown coherence metric {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceScore {
    pub metric: CoherenceMetric,
    pub value: f64,
    pub k: usize,
    pub top_n: usize,
    pub window: Option<usize>,
    pub per_topic: Vec<f64>,
}

/// Presence counts of single words and word pairs over a set of virtual
/// documents (windows).
struct Cooccurrence {
    windows: u64,
    single: BTreeMap<u32, u64>,
    pair: BTreeMap<(u32, u32), u64>,
}

impl Cooccurrence {
    fn empty() -> Self {
        Self {
            windows: 0,
            single: BTreeMap::new(),
            pair: BTreeMap::new(),
        }
    }

    fn add_window(&mut self, window: &[u32], relevant: &[bool]) {
        let mut present: Vec<u32> = window.iter().copied().filter(|&w| relevant[w as usize]).collect();
        present.sort_unstable();
        present.dedup();
        self.windows += 1;
        for (i, &a) in present.iter().enumerate() {
            *self.single.entry(a).or_default() += 1;
            for &b in &present[i + 1..] {
                *self.pair.entry((a, b)).or_default() += 1;
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.windows += other.windows;
        for (k, v) in other.single {
            *self.single.entry(k).or_default() += v;
        }
        for (k, v) in other.pair {
            *self.pair.entry(k).or_default() += v;
        }
        self
    }

    fn single(&self, w: u32) -> u64 {
        self.single.get(&w).copied().unwrap_or(0)
    }

    fn joint(&self, a: u32, b: u32) -> u64 {
        if a == b {
            return self.single(a);
        }
        self.pair.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }
}

/// Windows of one document: the whole document when it is no longer than
/// `window`, otherwise every contiguous run of `window` tokens.
fn windows_of(doc: &[u32], window: usize) -> impl Iterator<Item = &[u32]> {
    let n = if doc.is_empty() {
        0
    } else if doc.len() <= window {
        1
    } else {
        doc.len() - window + 1
    };
    let width = window.min(doc.len());
    (0..n).map(move |i| &doc[i..i + width])
}

fn count_windows(docs: &[Vec<u32>], window: usize, relevant: &[bool]) -> Cooccurrence {
    docs.par_iter()
        .map(|doc| {
            let mut c = Cooccurrence::empty();
            for w in windows_of(doc, window) {
                c.add_window(w, relevant);
            }
            c
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Cooccurrence::empty(), Cooccurrence::merge)
}

fn npmi(c: &Cooccurrence, a: u32, b: u32) -> f64 {
    let n = c.windows as f64;
    let p_a = c.single(a) as f64 / n + NPMI_EPSILON;
    let p_b = c.single(b) as f64 / n + NPMI_EPSILON;
    let p_ab = c.joint(a, b) as f64 / n + NPMI_EPSILON;
    (p_ab / (p_a * p_b)).ln() / -p_ab.ln()
}

fn cosine(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        0.0
    } else {
        dot / (nx * ny)
    }
}

/// c_v coherence of a list of topics, each given as its ranked top-word ids.
pub fn cv_for_topics(topics: &[Vec<u32>], docs: &[Vec<u32>], vocab_size: usize, window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::InvalidInput("coherence window must be positive".into()));
    }
    let relevant = relevance_mask(topics, vocab_size)?;
    let counts = count_windows(docs, window, &relevant);
    if counts.windows == 0 {
        return Err(Error::InvalidInput("no windows to count co-occurrences in".into()));
    }
    Ok(topics
        .iter()
        .map(|top| {
            let vectors: Vec<Vec<f64>> =
                top.iter().map(|&a| top.iter().map(|&b| npmi(&counts, a, b)).collect()).collect();
            let mut total = vec![0.0; top.len()];
            for v in &vectors {
                for (t, x) in total.iter_mut().zip(v) {
                    *t += x;
                }
            }
            vectors.iter().map(|v| cosine(v, &total)).sum::<f64>() / top.len() as f64
        })
        .collect())
}

/// UMass coherence of ranked top-word lists, with documents as the
/// co-occurrence unit: mean over ordered pairs of `ln((D(w_i, w_j) + 1) / D(w_j))`.
pub fn umass_for_topics(topics: &[Vec<u32>], docs: &[Vec<u32>], vocab_size: usize) -> Result<Vec<f64>> {
    let relevant = relevance_mask(topics, vocab_size)?;
    let counts = count_windows(docs, usize::MAX, &relevant);
    Ok(topics
        .iter()
        .map(|top| {
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for i in 1..top.len() {
                for j in 0..i {
                    let d_j = counts.single(top[j]) as f64;
                    sum += ((counts.joint(top[i], top[j]) as f64 + 1.0) / d_j.max(NPMI_EPSILON)).ln();
                    pairs += 1;
                }
            }
            if pairs == 0 {
                0.0
            } else {
                sum / pairs as f64
            }
        })
        .collect())
}

fn relevance_mask(topics: &[Vec<u32>], vocab_size: usize) -> Result<Vec<bool>> {
    if topics.is_empty() || topics.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("every topic needs at least one top word".into()));
    }
    let mut relevant = vec![false; vocab_size];
    for &w in topics.iter().flatten() {
        *relevant.get_mut(w as usize).ok_or(Error::OutOfRange {
            index: w as usize,
            len: vocab_size,
        })? = true;
    }
    Ok(relevant)
}

fn top_ids(model: &TopicModel, top_n: usize) -> Result<Vec<Vec<u32>>> {
    if top_n == 0 {
        return Err(Error::InvalidInput("top_n must be positive".into()));
    }
    (0..model.k()).map(|t| model.top_word_ids(t, top_n)).collect()
}

/// c_v coherence of a fitted model on the documents it was fitted on.
pub fn coherence_cv(model: &TopicModel, docs: &[Vec<u32>], top_n: usize, window: usize) -> Result<CoherenceScore> {
    let per_topic = cv_for_topics(&top_ids(model, top_n)?, docs, model.vocab.len(), window)?;
    Ok(CoherenceScore {
        metric: CoherenceMetric::CV,
        value: per_topic.iter().sum::<f64>() / per_topic.len() as f64,
        k: model.k(),
        top_n,
        window: Some(window),
        per_topic,
    })
}

/// UMass coherence of a fitted model.
pub fn coherence_umass(model: &TopicModel, docs: &[Vec<u32>], top_n: usize) -> Result<CoherenceScore> {
    let per_topic = umass_for_topics(&top_ids(model, top_n)?, docs, model.vocab.len())?;
    Ok(CoherenceScore {
        metric: CoherenceMetric::UMass,
        value: per_topic.iter().sum::<f64>() / per_topic.len() as f64,
        k: model.k(),
        top_n,
        window: None,
        per_topic,
    })
}
