use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

fn class_counts(scores: &[f64], labels: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    if let Some(bad) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::InvalidInput(format!("score {bad} is not a number")));
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::AucUndefined("labels contain a single class".into()));
    }
    Ok((pos, neg))
}

/// Area under the ROC curve as the normalized Mann-Whitney U statistic:
/// the fraction of (positive, negative) pairs ranked correctly, ties counting
/// one half. Computed from average ranks in `O(n log n)`.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (pos, neg) = class_counts(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let (pos, neg) = (pos as f64, neg as f64);
    let u = rank_sum_pos - pos * (pos + 1.0) / 2.0;
    Ok(u / (pos * neg))
}

/// ROC points at every distinct score threshold, from `(0, 0)` at `+inf` down
/// to `(1, 1)` at the lowest score. A sample is predicted positive when its
/// score is `>=` the threshold.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Result<Vec<RocPoint>> {
    let (pos, neg) = class_counts(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
        });
    }
    Ok(points)
}

/// Trapezoidal area under a ROC point list.
pub fn trapezoid_area(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation() {
        assert_eq!(auc(&[0.9, 0.8, 0.1], &[true, true, false]).unwrap(), 1.0);
    }

    #[test]
    fn tie_counts_half() {
        assert_eq!(auc(&[0.4, 0.4], &[true, false]).unwrap(), 0.5);
    }

    #[test]
    fn interleaved_example() {
        let a = auc(&[0.8, 0.7, 0.6, 0.2], &[true, false, true, false]).unwrap();
        assert_eq!(a, 0.75);
        let curve = roc_curve(&[0.8, 0.7, 0.6, 0.2], &[true, false, true, false]).unwrap();
        assert_eq!(trapezoid_area(&curve), 0.75);
        assert_eq!(curve.len(), 5);
        assert_eq!((curve[4].fpr, curve[4].tpr), (1.0, 1.0));
    }

    #[test]
    fn single_class_is_undefined() {
        assert!(matches!(auc(&[0.1, 0.2], &[true, true]), Err(Error::AucUndefined(_))));
        assert!(roc_curve(&[0.1], &[false]).is_err());
    }

    #[test]
    fn nan_scores_rejected() {
        assert!(auc(&[f64::NAN, 0.2], &[true, false]).is_err());
    }
}
