use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{stratified_folds, FoldPlan};
use super::linear::{train, HyperParams, LinearModel, ModelKind};
use super::predictions::DEFAULT_THRESHOLD;
use super::tfidf::{fit_tfidf, SparseVec, TfidfModel};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalReport};

/// Features of one fold, with TF-IDF fitted on the training split only.
#[derive(Debug, Clone)]
pub struct FoldData {
    pub tfidf: TfidfModel,
    pub x_train: Vec<SparseVec>,
    pub y_train: Vec<bool>,
    pub x_test: Vec<SparseVec>,
    pub y_test: Vec<bool>,
}

pub fn featurize_fold<D: AsRef<[String]> + Sync>(docs: &[D], labels: &[bool], plan: &FoldPlan, fold: usize) -> Result<FoldData> {
    let train_idx = plan.train_indices(fold);
    let test_idx = plan.test_indices(fold);
    let train_docs: Vec<&[String]> = train_idx.iter().map(|&i| docs[i].as_ref()).collect();
    let tfidf = fit_tfidf(&train_docs)?;
    Ok(FoldData {
        x_train: train_docs.iter().map(|d| tfidf.transform(d)).collect(),
        y_train: train_idx.iter().map(|&i| labels[i]).collect(),
        x_test: test_idx.iter().map(|&i| tfidf.transform(docs[i].as_ref())).collect(),
        y_test: test_idx.iter().map(|&i| labels[i]).collect(),
        tfidf,
    })
}

/// Train on a fold's training split and evaluate on its test split.
pub fn evaluate_fold(kind: ModelKind, data: &FoldData, hp: HyperParams, seed: u64) -> Result<EvalReport> {
    let model = train(kind, &data.x_train, &data.y_train, data.tfidf.dim(), hp, seed)?;
    report_for(&model, &data.x_test, &data.y_test)
}

fn report_for(model: &LinearModel, xs: &[SparseVec], ys: &[bool]) -> Result<EvalReport> {
    let scores: Vec<f64> = xs.iter().map(|x| model.score(x)).collect();
    let predicted: Vec<bool> = xs.iter().map(|x| model.probability(x) >= DEFAULT_THRESHOLD).collect();
    evaluate(&scores, &predicted, ys, DEFAULT_THRESHOLD)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPointResult {
    pub hyperparams: HyperParams,
    pub fold_reports: Vec<EvalReport>,
    pub mean: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub kind: ModelKind,
    pub k: usize,
    pub seed: u64,
    pub grid: Vec<GridPointResult>,
    /// Index into `grid` of the selected hyperparameters.
    pub chosen: usize,
}

impl CvResult {
    pub fn best(&self) -> &GridPointResult {
        &self.grid[self.chosen]
    }
}

/// Highest mean F1 wins (undefined F1 ranks last); ties go to the
/// lexicographically smaller `(lambda, learning_rate, epochs)`.
fn better(a: &GridPointResult, b: &GridPointResult) -> bool {
    let fa = a.mean.f1.unwrap_or(f64::NEG_INFINITY);
    let fb = b.mean.f1.unwrap_or(f64::NEG_INFINITY);
    match fa.total_cmp(&fb) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.hyperparams.cmp_tuple(&b.hyperparams) == Ordering::Less,
    }
}

/// Stratified k-fold cross-validation over a hyperparameter grid.
///
/// Folds and grid points run in parallel; each training run is sequential and
/// results are gathered in (grid index, fold index) order, so the outcome does
/// not depend on the thread count.
pub fn cross_validate<D: AsRef<[String]> + Sync>(
    kind: ModelKind,
    docs: &[D],
    labels: &[bool],
    grid: &[HyperParams],
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    if docs.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: docs.len(),
            right: labels.len(),
        });
    }
    if grid.is_empty() {
        return Err(Error::InvalidInput("hyperparameter grid is empty".into()));
    }
    let plan = stratified_folds(labels, k, seed)?;
    let folds: Vec<FoldData> = (0..k)
        .into_par_iter()
        .map(|f| featurize_fold(docs, labels, &plan, f))
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|g| (0..k).map(move |f| (g, f))).collect();
    let reports: Vec<EvalReport> = jobs
        .par_iter()
        .map(|&(g, f)| evaluate_fold(kind, &folds[f], grid[g], seed))
        .collect::<Result<_>>()?;

    let grid_results: Vec<GridPointResult> = grid
        .iter()
        .enumerate()
        .map(|(g, hp)| {
            let fold_reports = reports[g * k..(g + 1) * k].to_vec();
            let mean = EvalReport::mean(&fold_reports).expect("k >= 2 reports");
            GridPointResult {
                hyperparams: *hp,
                fold_reports,
                mean,
            }
        })
        .collect();

    let mut chosen = 0;
    for (i, r) in grid_results.iter().enumerate().skip(1) {
        if better(r, &grid_results[chosen]) {
            chosen = i;
        }
    }
    Ok(CvResult {
        kind,
        k,
        seed,
        grid: grid_results,
        chosen,
    })
}
