//! Prediction interchange file: one `{"sentence_id": "...", "prob": p}` object
//! per line. Produced by the `predict` stage and by external fine-tuning
//! harnesses alike.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::SentenceId;
use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub sentence_id: SentenceId,
    pub prob: f64,
    /// `prob >= threshold`.
    #[serde(skip)]
    pub label: bool,
}

impl Prediction {
    pub fn new(sentence_id: SentenceId, prob: f64, threshold: f64) -> Self {
        Self {
            sentence_id,
            prob,
            label: prob >= threshold,
        }
    }
}

#[derive(Deserialize)]
struct WireRecord {
    sentence_id: String,
    prob: f64,
}

/// Load a predictions file, deriving labels at `threshold` (inclusive).
pub fn load_predictions(path: &Path, threshold: f64) -> Result<Vec<Prediction>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: WireRecord =
            serde_json::from_str(&line).map_err(|e| Error::format(path, line_no, e.to_string()))?;
        let id: SentenceId = rec
            .sentence_id
            .parse()
            .map_err(|e: Error| Error::format(path, line_no, e.to_string()))?;
        if !(0.0..=1.0).contains(&rec.prob) {
            return Err(Error::format(
                path,
                line_no,
                format!("prob {} outside [0, 1]", rec.prob),
            ));
        }
        if !seen.insert(id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        out.push(Prediction::new(id, rec.prob, threshold));
    }
    Ok(out)
}

pub fn write_predictions(path: &Path, predictions: &[Prediction]) -> Result<()> {
    crate::io::write_jsonl(path, predictions)
}
