//! Linear classifiers over sparse features.
//!
//! * `Logit` minimizes `mean(log(1 + exp(-y' s))) + lambda/2 |w|^2` with
//!   full-batch gradient descent for a fixed number of epochs.
//! * `LinearSvm` minimizes `mean(max(0, 1 - y' s)) + lambda/2 |w|^2` with
//!   per-sample subgradient steps; the visiting order is reshuffled every
//!   epoch from a ChaCha8 stream seeded with the model seed.
//!
//! Here `s = w.x + b` and `y'` is the label mapped to `{-1, +1}`. The bias is
//! not regularized.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tfidf::SparseVec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logit,
    LinearSvm,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "logit" | "logistic" | "logistic_regression" => Ok(Self::Logit),
            "svm" | "linear_svm" | "linearsvm" => Ok(Self::LinearSvm),
            other => Err(Error::InvalidInput(format!("unknown model kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: u32,
}

impl HyperParams {
    /// Lexicographic order on `(lambda, learning_rate, epochs)`.
    pub fn cmp_tuple(&self, other: &Self) -> Ordering {
        self.lambda
            .total_cmp(&other.lambda)
            .then(self.learning_rate.total_cmp(&other.learning_rate))
            .then(self.epochs.cmp(&other.epochs))
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidInput("epochs must be positive".into()));
        }
        Ok(())
    }
}

/// lambda in {1e-4, 1e-3, 1e-2, 1e-1} x learning rate in {0.1, 0.5} x epochs in {100, 300}.
pub fn default_grid() -> Vec<HyperParams> {
    let mut grid = Vec::with_capacity(16);
    for lambda in [1e-4, 1e-3, 1e-2, 1e-1] {
        for learning_rate in [0.1, 0.5] {
            for epochs in [100, 300] {
                grid.push(HyperParams {
                    lambda,
                    learning_rate,
                    epochs,
                });
            }
        }
    }
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparams: HyperParams,
    pub seed: u64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LinearModel {
    /// `w.x + b`.
    pub fn score(&self, x: &SparseVec) -> f64 {
        x.iter()
            .filter(|(i, _)| (*i as usize) < self.weights.len())
            .map(|(i, v)| self.weights[i as usize] * v)
            .sum::<f64>()
            + self.bias
    }

    /// Sigmoid of the score. For the SVM this is a monotone squashing of the
    /// margin, not a calibrated probability.
    pub fn probability(&self, x: &SparseVec) -> f64 {
        sigmoid(self.score(x))
    }
}

/// Regularized mean logistic loss.
pub fn logistic_loss(weights: &[f64], bias: f64, xs: &[SparseVec], ys: &[bool], lambda: f64) -> f64 {
    let n = xs.len() as f64;
    let data: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| {
            let s = x.dot(weights) + bias;
            if y {
                softplus(-s)
            } else {
                softplus(s)
            }
        })
        .sum();
    data / n + 0.5 * lambda * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Analytic gradient of [`logistic_loss`] with respect to `(weights, bias)`.
pub fn logistic_gradient(
    weights: &[f64],
    bias: f64,
    xs: &[SparseVec],
    ys: &[bool],
    lambda: f64,
) -> (Vec<f64>, f64) {
    let n = xs.len() as f64;
    let mut gw: Vec<f64> = weights.iter().map(|w| lambda * w).collect();
    let mut gb = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let residual = (sigmoid(x.dot(weights) + bias) - y as u8 as f64) / n;
        for (i, v) in x.iter() {
            gw[i as usize] += residual * v;
        }
        gb += residual;
    }
    (gw, gb)
}

fn check_training_set(xs: &[SparseVec], ys: &[bool], dim: usize) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateTrainingSet("fewer than two samples".into()));
    }
    let pos = ys.iter().filter(|&&y| y).count();
    if pos == 0 || pos == ys.len() {
        return Err(Error::DegenerateTrainingSet("labels contain a single class".into()));
    }
    if let Some(bad) = xs.iter().flat_map(|x| x.indices.iter()).find(|&&i| i as usize >= dim) {
        return Err(Error::OutOfRange {
            index: *bad as usize,
            len: dim,
        });
    }
    Ok(())
}

/// Train a linear model on `dim`-dimensional sparse features.
pub fn train(
    kind: ModelKind,
    xs: &[SparseVec],
    ys: &[bool],
    dim: usize,
    hyperparams: HyperParams,
    seed: u64,
) -> Result<LinearModel> {
    hyperparams.validate()?;
    check_training_set(xs, ys, dim)?;
    let (weights, bias) = match kind {
        ModelKind::Logit => train_logit(xs, ys, dim, &hyperparams),
        ModelKind::LinearSvm => train_svm(xs, ys, dim, &hyperparams, seed),
    };
    if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
        return Err(Error::InvalidInput("training diverged to non-finite weights".into()));
    }
    Ok(LinearModel {
        kind,
        weights,
        bias,
        hyperparams,
        seed,
    })
}

fn train_logit(xs: &[SparseVec], ys: &[bool], dim: usize, hp: &HyperParams) -> (Vec<f64>, f64) {
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    for _ in 0..hp.epochs {
        let (gw, gb) = logistic_gradient(&w, b, xs, ys, hp.lambda);
        for (wi, gi) in w.iter_mut().zip(&gw) {
            *wi -= hp.learning_rate * gi;
        }
        b -= hp.learning_rate * gb;
    }
    (w, b)
}

fn train_svm(xs: &[SparseVec], ys: &[bool], dim: usize, hp: &HyperParams, seed: u64) -> (Vec<f64>, f64) {
    // w = scale * v keeps the per-step shrinkage O(1)
    let mut v = vec![0.0; dim];
    let mut scale = 1.0;
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut step = 0u64;

    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = hp.learning_rate / (1.0 + hp.learning_rate * hp.lambda * step as f64);
            step += 1;
            let y = if ys[i] { 1.0 } else { -1.0 };
            let margin = y * (scale * xs[i].dot(&v) + b);
            scale *= 1.0 - eta * hp.lambda;
            if margin < 1.0 {
                let coef = eta * y / scale;
                for (j, x) in xs[i].iter() {
                    v[j as usize] += coef * x;
                }
                b += eta * y;
            }
            if scale < 1e-9 {
                v.iter_mut().for_each(|x| *x *= scale);
                scale = 1.0;
            }
        }
    }
    v.iter_mut().for_each(|x| *x *= scale);
    (v, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(lambda: f64, lr: f64, epochs: u32) -> HyperParams {
        HyperParams {
            lambda,
            learning_rate: lr,
            epochs,
        }
    }

    #[test]
    fn separable_pair_is_fit() {
        let xs = vec![SparseVec::from_dense(&[1.0, 0.0]), SparseVec::from_dense(&[0.0, 1.0])];
        let ys = vec![true, false];
        for kind in [ModelKind::Logit, ModelKind::LinearSvm] {
            let m = train(kind, &xs, &ys, 2, hp(1e-3, 0.5, 100), 42).unwrap();
            assert!(m.score(&xs[0]) > 0.0, "{kind:?}");
            assert!(m.score(&xs[1]) < 0.0, "{kind:?}");
        }
    }

    #[test]
    fn zero_features_learn_the_prior() {
        let xs = vec![SparseVec::default(); 4];
        let ys = vec![true, false, false, false];
        let m = train(ModelKind::Logit, &xs, &ys, 3, hp(0.1, 0.5, 2000), 0).unwrap();
        assert!(m.weights.iter().all(|&w| w == 0.0));
        assert!((m.probability(&xs[0]) - 0.25).abs() < 1e-6);
    }

    #[test]
    fn single_class_is_degenerate() {
        let xs = vec![SparseVec::from_dense(&[1.0]); 3];
        let err = train(ModelKind::Logit, &xs, &[true, true, true], 1, hp(0.0, 0.1, 1), 0).unwrap_err();
        assert!(matches!(err, Error::DegenerateTrainingSet(_)));
    }

    #[test]
    fn bad_hyperparams_rejected() {
        let xs = vec![SparseVec::from_dense(&[1.0]), SparseVec::from_dense(&[0.0])];
        assert!(train(ModelKind::Logit, &xs, &[true, false], 1, hp(0.0, 0.0, 1), 0).is_err());
        assert!(train(ModelKind::Logit, &xs, &[true, false], 1, hp(0.0, 0.1, 0), 0).is_err());
    }

    #[test]
    fn svm_is_seed_deterministic() {
        let xs: Vec<SparseVec> = (0..20)
            .map(|i| SparseVec::from_dense(&[(i % 3) as f64, (i % 5) as f64 / 5.0, 1.0]))
            .collect();
        let ys: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
        let a = train(ModelKind::LinearSvm, &xs, &ys, 3, hp(1e-2, 0.1, 30), 7).unwrap();
        let b = train(ModelKind::LinearSvm, &xs, &ys, 3, hp(1e-2, 0.1, 30), 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_has_sixteen_points() {
        let g = default_grid();
        assert_eq!(g.len(), 16);
        assert!(g.windows(2).all(|w| w[0].cmp_tuple(&w[1]) == Ordering::Less));
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
        assert!((softplus(-800.0)).abs() < 1e-300 + 1e-300);
        assert!((softplus(800.0) - 800.0).abs() < 1e-9);
    }
}
