use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary two-rater agreement. `contingency[a][b]` counts items that rater A
/// labeled `a` and rater B labeled `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub kappa: Option<f64>,
    pub percent: f64,
    pub contingency: [[u64; 2]; 2],
}

/// Conventional reading of a kappa value (Viera & Garrett bands).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementBand {
    LessThanChance,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl AgreementBand {
    pub fn of(kappa: f64) -> Self {
        match kappa {
            k if k <= 0.0 => Self::LessThanChance,
            k if k <= 0.20 => Self::Slight,
            k if k <= 0.40 => Self::Fair,
            k if k <= 0.60 => Self::Moderate,
            k if k <= 0.80 => Self::Substantial,
            _ => Self::AlmostPerfect,
        }
    }
}

impl AgreementReport {
    pub fn n(&self) -> u64 {
        self.contingency.iter().flatten().sum()
    }

    pub fn band(&self) -> Option<AgreementBand> {
        self.kappa.map(AgreementBand::of)
    }
}

/// Cohen's kappa and percent agreement for two binary label lists.
pub fn cohen_kappa(a: &[bool], b: &[bool]) -> Result<AgreementReport> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("no items to compare".into()));
    }
    let mut contingency = [[0u64; 2]; 2];
    for (&x, &y) in a.iter().zip(b) {
        contingency[x as usize][y as usize] += 1;
    }
    // kappa = (n * agree - sum of marginal products) / (n^2 - same), in
    // integers so the only rounding is the final division
    let n = a.len() as i128;
    let agree = i128::from(contingency[0][0] + contingency[1][1]);
    let a_yes = i128::from(contingency[1][0] + contingency[1][1]);
    let b_yes = i128::from(contingency[0][1] + contingency[1][1]);
    let chance = a_yes * b_yes + (n - a_yes) * (n - b_yes);
    let p_o = agree as f64 / n as f64;
    let kappa = (chance < n * n).then(|| (n * agree - chance) as f64 / (n * n - chance) as f64);
    Ok(AgreementReport {
        kappa,
        percent: p_o,
        contingency,
    })
}
