//! False-positive / false-negative export for manual error analysis, and
//! tabulation of the categories annotators assign to them.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::Prediction;
use crate::corpus::{Sentence, SentenceId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    #[serde(rename = "FP")]
    FalsePositive,
    #[serde(rename = "FN")]
    FalseNegative,
    Skipped,
}

/// One line of the misclassification CSV. Skipped rows carry the reason in
/// `text` and leave the other data fields empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisclassRow {
    pub kind: RowKind,
    pub sentence_id: SentenceId,
    pub post_id: Option<u64>,
    pub prob: Option<f64>,
    pub gold: Option<u8>,
    pub text: String,
    pub category: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MisclassReport {
    pub rows: Vec<MisclassRow>,
    pub skipped: Vec<MisclassRow>,
}

impl MisclassReport {
    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    /// Misclassifications first, then the skipped section.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = crate::io::csv_writer(path)?;
        if self.rows.is_empty() && self.skipped.is_empty() {
            w.write_record(["kind", "sentence_id", "post_id", "prob", "gold", "text", "category"])?;
        }
        for row in self.rows.iter().chain(&self.skipped) {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Every FP and FN among `predictions`, sorted by sentence id; the text is
/// left empty when `sentences` does not hold the sentence. Predictions
/// lacking a gold label are listed in the skipped section, as are gold ids
/// without a prediction.
pub fn export_misclassifications(
    predictions: &[Prediction],
    gold: &BTreeMap<SentenceId, bool>,
    sentences: &[Sentence],
) -> MisclassReport {
    let by_id: HashMap<SentenceId, &Sentence> = sentences.iter().map(|s| (s.id, s)).collect();
    let mut preds: Vec<&Prediction> = predictions.iter().collect();
    preds.sort_by_key(|p| p.sentence_id);

    let mut report = MisclassReport::default();
    let skip = |id: SentenceId, reason: &str| MisclassRow {
        kind: RowKind::Skipped,
        sentence_id: id,
        post_id: None,
        prob: None,
        gold: None,
        text: reason.to_string(),
        category: String::new(),
    };

    for p in &preds {
        let Some(&label) = gold.get(&p.sentence_id) else {
            report.skipped.push(skip(p.sentence_id, "no gold label"));
            continue;
        };
        let kind = match (p.label, label) {
            (true, false) => RowKind::FalsePositive,
            (false, true) => RowKind::FalseNegative,
            _ => continue,
        };
        report.rows.push(MisclassRow {
            kind,
            sentence_id: p.sentence_id,
            post_id: Some(p.sentence_id.post),
            prob: Some(p.prob),
            gold: Some(label as u8),
            text: by_id.get(&p.sentence_id).map(|s| s.text.clone()).unwrap_or_default(),
            category: String::new(),
        });
    }

    let predicted: std::collections::HashSet<SentenceId> = preds.iter().map(|p| p.sentence_id).collect();
    for id in gold.keys().filter(|id| !predicted.contains(id)) {
        report.skipped.push(skip(*id, "no prediction"));
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryTally {
    pub categories: BTreeMap<String, u64>,
    pub unannotated: u64,
}

/// Read an annotated misclassification CSV and count the categories given to
/// FP/FN rows. Skipped rows are ignored.
pub fn tabulate_categories(path: &Path) -> Result<CategoryTally> {
    let mut r = crate::io::csv_reader(path)?;
    let mut tally = CategoryTally::default();
    for row in r.deserialize() {
        let row: MisclassRow = row?;
        if row.kind == RowKind::Skipped {
            continue;
        }
        let cat = row.category.trim();
        if cat.is_empty() {
            tally.unannotated += 1;
        } else {
            *tally.categories.entry(cat.to_string()).or_default() += 1;
        }
    }
    Ok(tally)
}
