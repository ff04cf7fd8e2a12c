//! LDA topic modeling: Gibbs fitting, coherence-based selection of the topic
//! count, dominant-topic assignment, and exports for manual topic labeling.

mod coherence;
mod lda;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use coherence::{
    coherence_cv, coherence_umass, cv_for_topics, umass_for_topics, CoherenceMetric, CoherenceScore, DEFAULT_TOP_N,
    DEFAULT_WINDOW, NPMI_EPSILON,
};
pub use lda::{fit_lda, LdaConfig, LdaSampler, DEFAULT_BETA, DEFAULT_BURN_IN, DEFAULT_ITERATIONS};

use crate::corpus::{Sentence, SentenceId, Vocabulary};
use crate::error::{Error, Result};
use crate::io::fmt_f64;

pub type TopicId = usize;

/// Number of top words stored per topic in the model summary file.
pub const SUMMARY_TOP_WORDS: usize = 30;
/// Sentences exported per topic for manual labeling.
pub const LABELING_SAMPLE_SIZE: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub config: LdaConfig,
    /// K × V topic–word probabilities.
    pub phi: Vec<Vec<f64>>,
    /// D × K document–topic probabilities.
    pub theta: Vec<Vec<f64>>,
    pub vocab: Vec<String>,
    pub coherence: Option<f64>,
}

impl TopicModel {
    pub fn k(&self) -> usize {
        self.phi.len()
    }

    pub fn num_docs(&self) -> usize {
        self.theta.len()
    }

    /// Argmax of the document's theta row; ties go to the lower topic id.
    pub fn dominant_topic(&self, doc: usize) -> Result<TopicId> {
        let row = self.theta.get(doc).ok_or(Error::OutOfRange {
            index: doc,
            len: self.theta.len(),
        })?;
        Ok(argmax_low(row))
    }

    /// Word ids of topic `topic` ranked by phi, ties broken by the
    /// lexicographically smaller term (the vocabulary is in term order).
    pub fn top_word_ids(&self, topic: TopicId, n: usize) -> Result<Vec<u32>> {
        let row = self.phi.get(topic).ok_or(Error::OutOfRange {
            index: topic,
            len: self.phi.len(),
        })?;
        let mut ids: Vec<u32> = (0..row.len() as u32).collect();
        ids.sort_by(|&a, &b| row[b as usize].total_cmp(&row[a as usize]).then(a.cmp(&b)));
        ids.truncate(n);
        Ok(ids)
    }

    pub fn top_words(&self, topic: TopicId, n: usize) -> Result<Vec<(String, f64)>> {
        Ok(self
            .top_word_ids(topic, n)?
            .into_iter()
            .map(|w| (self.vocab[w as usize].clone(), self.phi[topic][w as usize]))
            .collect())
    }
}

/// Index of the largest value; the first one wins ties.
pub fn argmax_low(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in row.iter().enumerate().skip(1) {
        if x > row[best] {
            best = i;
        }
    }
    best
}

/// How alpha is derived from the topic count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    /// `alpha = 50 / k`
    FiftyOverK,
    Fixed(f64),
}

/// Everything in an [`LdaConfig`] except `k` and `seed`, shared by every
/// point of a K grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaTemplate {
    pub alpha_policy: AlphaPolicy,
    pub beta: f64,
    pub iterations: u32,
    pub burn_in: u32,
}

impl Default for LdaTemplate {
    fn default() -> Self {
        Self {
            alpha_policy: AlphaPolicy::FiftyOverK,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

impl LdaTemplate {
    pub fn config(&self, k: usize, seed: u64) -> LdaConfig {
        LdaConfig {
            k,
            alpha: match self.alpha_policy {
                AlphaPolicy::FiftyOverK => 50.0 / k.max(1) as f64,
                AlphaPolicy::Fixed(a) => a,
            },
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KSelection {
    pub best_k: usize,
    /// One c_v score per distinct k, in ascending k order.
    pub scores: Vec<CoherenceScore>,
    /// The model fitted at `best_k`, with its coherence filled in.
    pub model: TopicModel,
}

/// Fit one model per distinct k (all with the same seed), score each with
/// c_v, and keep the most coherent; ties go to the smaller k.
pub fn select_k(
    docs: &[Vec<u32>],
    vocab: &Vocabulary,
    k_grid: &[usize],
    template: &LdaTemplate,
    seed: u64,
    top_n: usize,
    window: usize,
) -> Result<KSelection> {
    let grid: Vec<usize> = k_grid.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if grid.is_empty() {
        return Err(Error::InvalidInput("k grid is empty".into()));
    }
    let fitted: Vec<(TopicModel, CoherenceScore)> = grid
        .par_iter()
        .map(|&k| {
            let mut model = fit_lda(docs, vocab, template.config(k, seed))?;
            let score = coherence_cv(&model, docs, top_n, window)?;
            model.coherence = Some(score.value);
            Ok((model, score))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (_, s)) in fitted.iter().enumerate().skip(1) {
        if s.value > fitted[best].1.value {
            best = i;
        }
    }
    let scores = fitted.iter().map(|(_, s)| s.clone()).collect();
    let model = fitted.into_iter().nth(best).map(|(m, _)| m).expect("non-empty grid");
    Ok(KSelection {
        best_k: grid[best],
        scores,
        model,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordWeight {
    pub term: String,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic: TopicId,
    pub top_words: Vec<WordWeight>,
}

/// The topic model file: configuration and top words per topic. The full
/// theta matrix lives in a separate binary file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModelSummary {
    pub config: LdaConfig,
    pub k: usize,
    pub vocab_size: usize,
    pub num_docs: usize,
    pub coherence: Option<f64>,
    pub topics: Vec<TopicSummary>,
}

impl TopicModelSummary {
    pub fn of(model: &TopicModel, top_n: usize) -> Self {
        Self {
            config: model.config.clone(),
            k: model.k(),
            vocab_size: model.vocab.len(),
            num_docs: model.num_docs(),
            coherence: model.coherence,
            topics: (0..model.k())
                .map(|t| TopicSummary {
                    topic: t,
                    top_words: model
                        .top_words(t, top_n)
                        .expect("topic in range")
                        .into_iter()
                        .map(|(term, prob)| WordWeight { term, prob })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn write_model_summary(path: &Path, model: &TopicModel) -> Result<()> {
    crate::io::write_json(path, &TopicModelSummary::of(model, SUMMARY_TOP_WORDS))
}

/// Binary row-major matrix: `rows: u64`, `cols: u64`, then `rows * cols`
/// IEEE-754 doubles, all little-endian.
pub fn write_matrix(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
    put(&(rows.len() as u64).to_le_bytes())?;
    put(&(cols as u64).to_le_bytes())?;
    for x in rows.iter().flatten() {
        put(&x.to_le_bytes())?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    BufReader::new(file).read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
    let word = |i: usize| -> Option<[u8; 8]> { bytes.get(i * 8..i * 8 + 8).and_then(|s| s.try_into().ok()) };
    let bad = || Error::format(path, 0, "truncated or oversized matrix file");
    let rows = u64::from_le_bytes(word(0).ok_or_else(bad)?) as usize;
    let cols = u64::from_le_bytes(word(1).ok_or_else(bad)?) as usize;
    if bytes.len() != 16 + rows.saturating_mul(cols).saturating_mul(8) {
        return Err(bad());
    }
    Ok((0..rows)
        .map(|r| (0..cols).map(|c| f64::from_le_bytes(word(2 + r * cols + c).unwrap())).collect())
        .collect())
}

pub fn write_coherence_csv(path: &Path, scores: &[CoherenceScore]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["k", "metric", "value"])?;
    for s in scores {
        w.write_record([s.k.to_string(), s.metric.to_string(), fmt_f64(s.value)])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Dominant topic of every modeled document, keyed by sentence id.
/// `doc_ids[d]` names the sentence behind theta row `d`.
pub fn dominant_assignments(model: &TopicModel, doc_ids: &[SentenceId]) -> Result<BTreeMap<SentenceId, TopicId>> {
    if doc_ids.len() != model.num_docs() {
        return Err(Error::LengthMismatch {
            left: doc_ids.len(),
            right: model.num_docs(),
        });
    }
    doc_ids
        .iter()
        .enumerate()
        .map(|(d, &id)| Ok((id, model.dominant_topic(d)?)))
        .collect()
}

pub fn write_assignments(path: &Path, assignments: &BTreeMap<SentenceId, TopicId>) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["sentence_id", "topic"])?;
    for (id, t) in assignments {
        w.write_record([id.to_string(), t.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_assignments(path: &Path) -> Result<BTreeMap<SentenceId, TopicId>> {
    #[derive(Deserialize)]
    struct Row {
        sentence_id: SentenceId,
        topic: TopicId,
    }
    let mut out = BTreeMap::new();
    for (i, row) in crate::io::csv_reader(path)?.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::format(path, i + 2, e.to_string()))?;
        if out.insert(row.sentence_id, row.topic).is_some() {
            return Err(Error::DuplicateId(row.sentence_id.to_string()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelingRow {
    pub topic: TopicId,
    pub sentence_id: SentenceId,
    pub text: String,
}

/// Up to `per_topic` sentences per topic, drawn uniformly without replacement
/// among the sentences whose dominant topic it is, for manual labeling.
pub fn labeling_sample(
    assignments: &BTreeMap<SentenceId, TopicId>,
    sentences: &[Sentence],
    k: usize,
    per_topic: usize,
    seed: u64,
) -> Vec<LabelingRow> {
    let text: BTreeMap<SentenceId, &str> = sentences.iter().map(|s| (s.id, s.text.as_str())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for topic in 0..k {
        let members: Vec<SentenceId> = assignments
            .iter()
            .filter(|&(id, &t)| t == topic && text.contains_key(id))
            .map(|(&id, _)| id)
            .collect();
        let mut picked = crate::sampling::sample_without_replacement(&members, per_topic, &mut rng);
        picked.sort();
        rows.extend(picked.into_iter().map(|id| LabelingRow {
            topic,
            sentence_id: id,
            text: text[&id].to_string(),
        }));
    }
    rows
}

pub fn write_labeling_csv(path: &Path, rows: &[LabelingRow]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["topic", "sentence_id", "text"])?;
    for r in rows {
        w.write_record([r.topic.to_string(), r.sentence_id.to_string(), r.text.clone()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
