//! Collapsed Gibbs sampling for latent Dirichlet allocation.
//!
//! Each sweep visits every token position in document order and resamples
//! its topic from
//!
//! ```text
//! p(z = k) ∝ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
//! ```
//!
//! with the token's own assignment removed from the counts. After `burn_in`
//! sweeps, the count matrices are averaged over the remaining sweeps and the
//! smoothed estimates
//!
//! ```text
//! phi_kw   = (n_kw + beta)  / (n_k + V beta)
//! theta_dk = (n_dk + alpha) / (n_d + K alpha)
//! ```
//!
//! are taken from those averages. A single chain driven by ChaCha8 seeded with
//! `seed` makes the whole fit reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TopicModel;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: u32,
    pub burn_in: u32,
    pub seed: u64,
}

pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: u32 = 1000;
pub const DEFAULT_BURN_IN: u32 = 200;

impl LdaConfig {
    /// `alpha = 50 / k`, `beta = 0.01`, 1000 sweeps with 200 of burn-in.
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            alpha: 50.0 / k.max(1) as f64,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) || !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidInput("alpha and beta must be positive".into()));
        }
        if self.iterations == 0 || self.burn_in >= self.iterations {
            return Err(Error::InvalidInput(format!(
                "burn_in ({}) must be below iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }
}

/// State of one Gibbs chain. Exposed so callers can inspect the count
/// invariants between sweeps.
pub struct LdaSampler<'a> {
    docs: &'a [Vec<u32>],
    vocab_size: usize,
    cfg: LdaConfig,
    z: Vec<Vec<u32>>,
    n_dk: Vec<u32>,
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    acc_dk: Vec<f64>,
    acc_kw: Vec<f64>,
    sweeps: u32,
    retained: u32,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl<'a> LdaSampler<'a> {
    /// Validate the input and draw the initial assignment uniformly at random.
    pub fn new(docs: &'a [Vec<u32>], vocab_size: usize, cfg: LdaConfig) -> Result<Self> {
        cfg.validate()?;
        if docs.is_empty() {
            return Err(Error::InvalidInput("no documents to model".into()));
        }
        if let Some(d) = docs.iter().position(Vec::is_empty) {
            return Err(Error::InvalidInput(format!("document {d} is empty")));
        }
        if let Some(&w) = docs.iter().flatten().find(|&&w| w as usize >= vocab_size) {
            return Err(Error::OutOfRange {
                index: w as usize,
                len: vocab_size,
            });
        }
        let total: usize = docs.iter().map(Vec::len).sum();
        if cfg.k > total {
            return Err(Error::InvalidInput(format!(
                "k = {} exceeds the {total} tokens of the corpus",
                cfg.k
            )));
        }

        let k = cfg.k;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut n_dk = vec![0u32; docs.len() * k];
        let mut n_kw = vec![0u32; k * vocab_size];
        let mut n_k = vec![0u32; k];
        let z = docs
            .iter()
            .enumerate()
            .map(|(d, doc)| {
                doc.iter()
                    .map(|&w| {
                        let t = rng.gen_range(0..k);
                        n_dk[d * k + t] += 1;
                        n_kw[t * vocab_size + w as usize] += 1;
                        n_k[t] += 1;
                        t as u32
                    })
                    .collect()
            })
            .collect();

        Ok(Self {
            docs,
            vocab_size,
            acc_dk: vec![0.0; docs.len() * k],
            acc_kw: vec![0.0; k * vocab_size],
            weights: vec![0.0; k],
            cfg,
            z,
            n_dk,
            n_kw,
            n_k,
            sweeps: 0,
            retained: 0,
            rng,
        })
    }

    pub fn config(&self) -> &LdaConfig {
        &self.cfg
    }

    pub fn sweeps_done(&self) -> u32 {
        self.sweeps
    }

    pub fn is_done(&self) -> bool {
        self.sweeps >= self.cfg.iterations
    }

    /// Current topic assignment of every token.
    pub fn assignments(&self) -> &[Vec<u32>] {
        &self.z
    }

    /// Resample every token once; accumulate counts once past burn-in.
    pub fn sweep(&mut self) {
        let k = self.cfg.k;
        let v = self.vocab_size;
        let (alpha, beta) = (self.cfg.alpha, self.cfg.beta);
        let v_beta = v as f64 * beta;

        for (d, doc) in self.docs.iter().enumerate() {
            let row = d * k;
            for (pos, &w) in doc.iter().enumerate() {
                let w = w as usize;
                let old = self.z[d][pos] as usize;
                self.n_dk[row + old] -= 1;
                self.n_kw[old * v + w] -= 1;
                self.n_k[old] -= 1;

                let mut total = 0.0;
                for t in 0..k {
                    let p = (self.n_dk[row + t] as f64 + alpha) * (self.n_kw[t * v + w] as f64 + beta)
                        / (self.n_k[t] as f64 + v_beta);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.gen::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                self.z[d][pos] = new as u32;
                self.n_dk[row + new] += 1;
                self.n_kw[new * v + w] += 1;
                self.n_k[new] += 1;
            }
        }

        self.sweeps += 1;
        if self.sweeps > self.cfg.burn_in {
            for (acc, &n) in self.acc_dk.iter_mut().zip(&self.n_dk) {
                *acc += n as f64;
            }
            for (acc, &n) in self.acc_kw.iter_mut().zip(&self.n_kw) {
                *acc += n as f64;
            }
            self.retained += 1;
        }
    }

    /// Recount everything from the assignments and check the running counts:
    /// `sum_k n_dk = |d|` for every document and `sum_w n_kw = n_k` for every topic.
    pub fn verify_counts(&self) -> Result<()> {
        let k = self.cfg.k;
        let v = self.vocab_size;
        let mut n_dk = vec![0u32; self.docs.len() * k];
        let mut n_kw = vec![0u32; k * v];
        let mut n_k = vec![0u32; k];
        for (d, (doc, zs)) in self.docs.iter().zip(&self.z).enumerate() {
            for (&w, &t) in doc.iter().zip(zs) {
                n_dk[d * k + t as usize] += 1;
                n_kw[t as usize * v + w as usize] += 1;
                n_k[t as usize] += 1;
            }
        }
        let broken = |what: &str| Err(Error::InvalidInput(format!("Gibbs count invariant violated: {what}")));
        if n_dk != self.n_dk || n_kw != self.n_kw || n_k != self.n_k {
            return broken("running counts differ from a recount");
        }
        for (d, doc) in self.docs.iter().enumerate() {
            let s: u32 = self.n_dk[d * k..(d + 1) * k].iter().sum();
            if s as usize != doc.len() {
                return broken(&format!("document {d} topic counts sum to {s}, length {}", doc.len()));
            }
        }
        for t in 0..k {
            let s: u32 = self.n_kw[t * v..(t + 1) * v].iter().sum();
            if s != self.n_k[t] {
                return broken(&format!("topic {t} word counts sum to {s}, n_k {}", self.n_k[t]));
            }
        }
        Ok(())
    }

    /// Run any remaining sweeps and build the smoothed estimates.
    pub fn finish(mut self, vocab: &Vocabulary) -> TopicModel {
        while !self.is_done() {
            self.sweep();
        }
        let k = self.cfg.k;
        let v = self.vocab_size;
        let scale = 1.0 / self.retained as f64;
        let (alpha, beta) = (self.cfg.alpha, self.cfg.beta);

        let phi = (0..k)
            .map(|t| {
                let row: Vec<f64> = self.acc_kw[t * v..(t + 1) * v].iter().map(|&c| c * scale + beta).collect();
                normalize(row)
            })
            .collect();
        let theta = (0..self.docs.len())
            .map(|d| {
                let row: Vec<f64> = self.acc_dk[d * k..(d + 1) * k].iter().map(|&c| c * scale + alpha).collect();
                normalize(row)
            })
            .collect();

        TopicModel {
            config: self.cfg,
            phi,
            theta,
            vocab: vocab.terms().to_vec(),
            coherence: None,
        }
    }
}

fn normalize(mut row: Vec<f64>) -> Vec<f64> {
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x /= sum);
    row
}

/// Fit LDA on index-encoded documents.
pub fn fit_lda(docs: &[Vec<u32>], vocab: &Vocabulary, cfg: LdaConfig) -> Result<TopicModel> {
    let mut sampler = LdaSampler::new(docs, vocab.len(), cfg)?;
    while !sampler.is_done() {
        sampler.sweep();
    }
    Ok(sampler.finish(vocab))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(n: usize) -> Vocabulary {
        Vocabulary::from_counts((0..n).map(|i| (format!("w{i:02}"), 1)))
    }

    fn short_cfg(k: usize, seed: u64) -> LdaConfig {
        LdaConfig {
            iterations: 60,
            burn_in: 20,
            ..LdaConfig::new(k, seed)
        }
    }

    #[test]
    fn defaults_follow_standard_priors() {
        let cfg = LdaConfig::new(9, 1);
        assert!((cfg.alpha - 50.0 / 9.0).abs() < 1e-15);
        assert_eq!(cfg.beta, 0.01);
        assert_eq!((cfg.iterations, cfg.burn_in), (1000, 200));
    }

    #[test]
    fn single_topic_is_smoothed_unigram() {
        let docs = vec![vec![0, 1, 1], vec![2, 1], vec![0]];
        let v = vocab(3);
        let m = fit_lda(&docs, &v, short_cfg(1, 3)).unwrap();
        assert!(m.theta.iter().all(|row| row == &vec![1.0]));
        let counts = [2.0, 3.0, 1.0];
        for (w, c) in counts.iter().enumerate() {
            let expect = (c + 0.01) / (6.0 + 3.0 * 0.01);
            assert!((m.phi[0][w] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn counts_conserved_every_sweep() {
        let docs: Vec<Vec<u32>> = (0..30).map(|d| (0..8).map(|i| ((d * 7 + i * 3) % 12) as u32).collect()).collect();
        let mut s = LdaSampler::new(&docs, 12, short_cfg(4, 11)).unwrap();
        s.verify_counts().unwrap();
        while !s.is_done() {
            s.sweep();
            s.verify_counts().unwrap();
        }
    }

    #[test]
    fn rows_are_normalized_and_positive() {
        let docs: Vec<Vec<u32>> = (0..20).map(|d| vec![(d % 5) as u32, ((d + 1) % 5) as u32]).collect();
        let m = fit_lda(&docs, &vocab(5), short_cfg(3, 5)).unwrap();
        for row in m.phi.iter().chain(&m.theta) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn same_seed_same_bits() {
        let docs: Vec<Vec<u32>> = (0..15).map(|d| (0..5).map(|i| ((d + i) % 9) as u32).collect()).collect();
        let a = fit_lda(&docs, &vocab(9), short_cfg(3, 99)).unwrap();
        let b = fit_lda(&docs, &vocab(9), short_cfg(3, 99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn input_validation() {
        let v = vocab(3);
        assert!(fit_lda(&[vec![0], vec![]], &v, short_cfg(1, 0)).is_err());
        assert!(fit_lda(&[], &v, short_cfg(1, 0)).is_err());
        assert!(fit_lda(&[vec![0, 1]], &v, short_cfg(3, 0)).is_err());
        assert!(fit_lda(&[vec![7]], &v, short_cfg(1, 0)).is_err());
        let bad = LdaConfig {
            burn_in: 60,
            ..short_cfg(1, 0)
        };
        assert!(fit_lda(&[vec![0]], &v, bad).is_err());
    }
}
