//! Drawing sentences for annotation and merging two raters' labels.
//!
//! All random draws use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64` and a partial Fisher–Yates shuffle whose indices are drawn
//! as `u64`, so a given seed yields the same sample on every platform.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::Prediction;
use crate::corpus::{Sentence, SentenceId};
use crate::error::{Error, Result};
use crate::eval::{cohen_kappa, AgreementReport};

/// Gold or rater labels keyed by sentence id.
pub type Labels = BTreeMap<SentenceId, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Random,
    Judgmental,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub mode: SampleMode,
    pub size: usize,
    pub seed: u64,
    #[serde(default)]
    pub exclude_ids: BTreeSet<SentenceId>,
    /// `(positives, negatives)` to draw among predicted labels; judgmental
    /// mode only.
    #[serde(default)]
    pub per_class: Option<(usize, usize)>,
}

impl SamplePlan {
    pub fn random(size: usize, seed: u64) -> Self {
        Self {
            mode: SampleMode::Random,
            size,
            seed,
            exclude_ids: BTreeSet::new(),
            per_class: None,
        }
    }

    pub fn judgmental(positives: usize, negatives: usize, seed: u64) -> Self {
        Self {
            mode: SampleMode::Judgmental,
            size: positives + negatives,
            seed,
            exclude_ids: BTreeSet::new(),
            per_class: Some((positives, negatives)),
        }
    }
}

/// Draw `n` distinct items uniformly without replacement, in draw order.
pub fn sample_without_replacement<T: Clone>(items: &[T], n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let n = n.min(items.len());
    for i in 0..n {
        let j = rng.gen_range(i as u64..items.len() as u64) as usize;
        idx.swap(i, j);
    }
    idx[..n].iter().map(|&i| items[i].clone()).collect()
}

fn draw_stratum(
    population: &[SentenceId],
    n: usize,
    stratum: &str,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SentenceId>> {
    if population.len() < n {
        return Err(Error::InsufficientPopulation {
            stratum: stratum.to_string(),
            requested: n,
            available: population.len(),
        });
    }
    Ok(sample_without_replacement(population, n, rng))
}

/// Sentence ids drawn per `plan`, sorted by id.
///
/// Random mode draws from all sentences outside `exclude_ids`. Judgmental
/// mode draws the requested number of predicted positives, then predicted
/// negatives, from the sentences that have a prediction.
pub fn draw_sample(
    sentences: &[Sentence],
    plan: &SamplePlan,
    predictions: Option<&[Prediction]>,
) -> Result<Vec<SentenceId>> {
    if plan.size == 0 {
        return Err(Error::InvalidInput("sample size must be positive".into()));
    }
    let mut population: Vec<SentenceId> =
        sentences.iter().map(|s| s.id).filter(|id| !plan.exclude_ids.contains(id)).collect();
    population.sort();
    population.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);

    let mut drawn = match plan.mode {
        SampleMode::Random => draw_stratum(&population, plan.size, "population", &mut rng)?,
        SampleMode::Judgmental => {
            let (pos_n, neg_n) = plan
                .per_class
                .ok_or_else(|| Error::InvalidInput("judgmental sampling needs per-class sizes".into()))?;
            if pos_n + neg_n != plan.size {
                return Err(Error::InvalidInput(format!(
                    "per-class sizes {pos_n} + {neg_n} do not add up to sample size {}",
                    plan.size
                )));
            }
            let predictions =
                predictions.ok_or_else(|| Error::InvalidInput("judgmental sampling needs predictions".into()))?;
            let predicted: BTreeMap<SentenceId, bool> = predictions.iter().map(|p| (p.sentence_id, p.label)).collect();
            let (pos, neg): (Vec<SentenceId>, Vec<SentenceId>) = population
                .iter()
                .filter(|id| predicted.contains_key(id))
                .partition(|id| predicted[id]);
            let mut out = draw_stratum(&pos, pos_n, "predicted-positive", &mut rng)?;
            out.extend(draw_stratum(&neg, neg_n, "predicted-negative", &mut rng)?);
            out
        }
    };
    drawn.sort();
    Ok(drawn)
}

fn parse_label(raw: &str) -> Option<bool> {
    match raw.trim() {
        "1" => Some(true),
        "0" => Some(false),
        _ => None,
    }
}

fn label_str(label: bool) -> &'static str {
    if label {
        "1"
    } else {
        "0"
    }
}

/// Read an `id,label` CSV (label 0 or 1). Further columns, such as an
/// annotator's `note`, are ignored.
pub fn read_labels(path: &Path) -> Result<Labels> {
    let mut reader = crate::io::csv_reader(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::format(path, 1, format!("missing `{name}` column")))
    };
    let (id_col, label_col) = (col("id")?, col("label")?);
    let mut out = Labels::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record?;
        let id: SentenceId = record
            .get(id_col)
            .unwrap_or_default()
            .parse()
            .map_err(|e: Error| Error::format(path, line, e.to_string()))?;
        let raw = record.get(label_col).unwrap_or_default();
        let label = parse_label(raw).ok_or_else(|| Error::format(path, line, format!("label `{raw}` is not 0 or 1")))?;
        if out.insert(id, label).is_some() {
            return Err(Error::DuplicateId(id.to_string()));
        }
    }
    Ok(out)
}

pub fn write_labels(path: &Path, labels: &Labels) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["id", "label"])?;
    for (id, &label) in labels {
        w.write_record([id.to_string().as_str(), label_str(label)])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// An annotation sheet for the drawn ids: `id,label,note,text` with `label`
/// and `note` left blank for the rater.
pub fn write_annotation_sheet(path: &Path, ids: &[SentenceId], sentences: &[Sentence]) -> Result<()> {
    let text: BTreeMap<SentenceId, &str> = sentences.iter().map(|s| (s.id, s.text.as_str())).collect();
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["id", "label", "note", "text"])?;
    for id in ids {
        let t = text.get(id).ok_or_else(|| Error::InvalidInput(format!("sentence {id} not found")))?;
        w.write_record([id.to_string().as_str(), "", "", t])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub id: SentenceId,
    pub label_a: bool,
    pub label_b: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeResult {
    pub report: AgreementReport,
    pub disagreements: Vec<Disagreement>,
}

/// Agreement between two raters over the same ids, plus the items they
/// disagree on, in id order.
pub fn merge_labels(a: &Labels, b: &Labels) -> Result<MergeResult> {
    let only: Vec<String> = a
        .keys()
        .filter(|id| !b.contains_key(id))
        .chain(b.keys().filter(|id| !a.contains_key(id)))
        .map(ToString::to_string)
        .collect();
    if !only.is_empty() {
        return Err(Error::IdMismatch(only));
    }
    let (la, lb): (Vec<bool>, Vec<bool>) = a.iter().map(|(id, &x)| (x, b[id])).unzip();
    let report = cohen_kappa(&la, &lb)?;
    let disagreements = a
        .iter()
        .filter(|&(id, &x)| b[id] != x)
        .map(|(&id, &x)| Disagreement {
            id,
            label_a: x,
            label_b: !x,
        })
        .collect();
    Ok(MergeResult { report, disagreements })
}

pub fn merge_annotations(rater_a: &Path, rater_b: &Path) -> Result<MergeResult> {
    merge_labels(&read_labels(rater_a)?, &read_labels(rater_b)?)
}

/// `id,label_a,label_b,resolved`, with `resolved` left blank for adjudication.
pub fn write_disagreements(path: &Path, disagreements: &[Disagreement]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(["id", "label_a", "label_b", "resolved"])?;
    for d in disagreements {
        w.write_record([d.id.to_string().as_str(), label_str(d.label_a), label_str(d.label_b), ""])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Final gold labels: the items both raters agree on, plus the `resolved`
/// label of every disagreement in the adjudicated file.
pub fn resolve_gold(a: &Labels, b: &Labels, adjudicated: &Path) -> Result<Labels> {
    let merged = merge_labels(a, b)?;
    let mut reader = crate::io::csv_reader(adjudicated)?;
    let mut resolved = Labels::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record?;
        let id: SentenceId = record
            .get(0)
            .unwrap_or_default()
            .parse()
            .map_err(|e: Error| Error::format(adjudicated, line, e.to_string()))?;
        let raw = record.get(3).unwrap_or_default();
        let label = parse_label(raw)
            .ok_or_else(|| Error::format(adjudicated, line, format!("item {id} is not resolved to 0 or 1")))?;
        resolved.insert(id, label);
    }
    let expected: BTreeSet<SentenceId> = merged.disagreements.iter().map(|d| d.id).collect();
    let got: BTreeSet<SentenceId> = resolved.keys().copied().collect();
    if expected != got {
        let diff = expected.symmetric_difference(&got).map(ToString::to_string).collect();
        return Err(Error::IdMismatch(diff));
    }
    let mut gold = a.clone();
    gold.extend(resolved);
    Ok(gold)
}
