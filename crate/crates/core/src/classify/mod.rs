//! TF-IDF featurization, linear baselines, stratified cross-validation and
//! the prediction interchange format.

mod cv;
mod folds;
mod linear;
mod predictions;
mod tfidf;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use cv::{cross_validate, evaluate_fold, featurize_fold, CvResult, FoldData, GridPointResult};
pub use folds::{stratified_folds, FoldPlan, DEFAULT_FOLDS, DEFAULT_SEED};
pub use linear::{
    default_grid, logistic_gradient, logistic_loss, sigmoid, train, HyperParams, LinearModel, ModelKind,
};
pub use predictions::{load_predictions, write_predictions, Prediction, DEFAULT_THRESHOLD};
pub use tfidf::{fit_tfidf, Norm, SparseVec, TfidfModel};

use crate::corpus::TokenizedDoc;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A fitted TF-IDF transform together with the linear model trained on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    pub format_version: u32,
    pub tfidf: TfidfModel,
    pub model: LinearModel,
    pub threshold: f64,
}

impl Classifier {
    /// Fit TF-IDF and the model on the full labeled set.
    pub fn fit<D: AsRef<[String]>>(
        kind: ModelKind,
        docs: &[D],
        labels: &[bool],
        hyperparams: HyperParams,
        seed: u64,
    ) -> Result<Self> {
        let tfidf = fit_tfidf(docs)?;
        let xs = tfidf.transform_all(docs);
        let model = train(kind, &xs, labels, tfidf.dim(), hyperparams, seed)?;
        Ok(Self {
            format_version: MODEL_FORMAT_VERSION,
            tfidf,
            model,
            threshold: DEFAULT_THRESHOLD,
        })
    }

    pub fn predict(&self, doc: &TokenizedDoc) -> Prediction {
        let x = self.tfidf.transform(&doc.tokens);
        Prediction::new(doc.sentence_id, self.model.probability(&x), self.threshold)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::io::write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let model: Self = crate::io::read_json(path)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported model format version {}",
                model.format_version
            )));
        }
        if model.model.weights.len() != model.tfidf.dim() {
            return Err(Error::InvalidInput("model weights do not match vocabulary size".into()));
        }
        Ok(model)
    }
}
