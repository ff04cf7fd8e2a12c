use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    /// Tally predicted against gold labels.
    pub fn from_labels(predicted: &[bool], gold: &[bool]) -> Result<Self> {
        if predicted.len() != gold.len() {
            return Err(Error::LengthMismatch {
                left: predicted.len(),
                right: gold.len(),
            });
        }
        let mut cm = Self::default();
        for (&p, &g) in predicted.iter().zip(gold) {
            match (p, g) {
                (true, true) => cm.tp += 1,
                (true, false) => cm.fp += 1,
                (false, true) => cm.fn_ += 1,
                (false, false) => cm.tn += 1,
            }
        }
        Ok(cm)
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Same as recall.
    pub fn tpr(&self) -> Option<f64> {
        self.recall()
    }

    /// `FP / (FP + TN)`.
    pub fn fpr(&self) -> Option<f64> {
        ratio(self.fp, self.fp + self.tn)
    }

    pub fn f1(&self) -> Option<f64> {
        let (p, r) = (self.precision()?, self.recall()?);
        (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
    }

    pub fn accuracy(&self) -> Option<f64> {
        ratio(self.tp + self.tn, self.total())
    }

    pub fn mcc(&self) -> Option<f64> {
        let (tp, fp, fn_, tn) = (self.tp as f64, self.fp as f64, self.fn_ as f64, self.tn as f64);
        let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
        (den > 0.0).then(|| (tp * tn - fp * fn_) / den.sqrt())
    }
}

impl std::ops::AddAssign for ConfusionMatrix {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
        self.tn += rhs.tn;
    }
}

/// Classification metrics. `None` marks a metric whose denominator is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
    pub mcc: Option<f64>,
    pub auc: Option<f64>,
    pub n: u64,
    pub threshold: f64,
}

impl EvalReport {
    pub const CSV_HEADER: &'static str = "precision,recall,f1,accuracy,mcc,auc,n,threshold";

    pub fn to_csv_row(&self) -> String {
        use crate::io::{fmt_f64, fmt_opt};
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_opt(self.precision),
            fmt_opt(self.recall),
            fmt_opt(self.f1),
            fmt_opt(self.accuracy),
            fmt_opt(self.mcc),
            fmt_opt(self.auc),
            self.n,
            fmt_f64(self.threshold)
        )
    }

    /// Field-wise mean over reports; a metric is averaged over the reports
    /// where it is defined and is undefined if it is undefined everywhere.
    pub fn mean(reports: &[EvalReport]) -> Option<EvalReport> {
        let first = reports.first()?;
        let avg = |f: fn(&EvalReport) -> Option<f64>| {
            let vals: Vec<f64> = reports.iter().filter_map(f).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        Some(EvalReport {
            precision: avg(|r| r.precision),
            recall: avg(|r| r.recall),
            f1: avg(|r| r.f1),
            accuracy: avg(|r| r.accuracy),
            mcc: avg(|r| r.mcc),
            auc: avg(|r| r.auc),
            n: reports.iter().map(|r| r.n).sum(),
            threshold: first.threshold,
        })
    }
}

/// Precision, recall, F1, accuracy and MCC of a confusion matrix (AUC unset).
pub fn metrics_from_confusion(cm: &ConfusionMatrix, threshold: f64) -> Result<EvalReport> {
    if cm.total() == 0 {
        return Err(Error::InvalidInput("confusion matrix is empty".into()));
    }
    Ok(EvalReport {
        precision: cm.precision(),
        recall: cm.recall(),
        f1: cm.f1(),
        accuracy: cm.accuracy(),
        mcc: cm.mcc(),
        auc: None,
        n: cm.total(),
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn worked_example() {
        let r = metrics_from_confusion(&ConfusionMatrix::new(2, 1, 1, 6), 0.5).unwrap();
        assert_abs_diff_eq!(r.precision.unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.recall.unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.f1.unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.accuracy.unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn mcc_identities() {
        assert_eq!(ConfusionMatrix::new(1, 0, 0, 1).mcc(), Some(1.0));
        assert_eq!(ConfusionMatrix::new(0, 1, 1, 0).mcc(), Some(-1.0));
        assert_abs_diff_eq!(ConfusionMatrix::new(45, 5, 5, 45).mcc().unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn zero_denominators_are_undefined() {
        let cm = ConfusionMatrix::new(0, 0, 3, 7);
        assert_eq!(cm.precision(), None);
        assert_eq!(cm.recall(), Some(0.0));
        assert_eq!(cm.f1(), None);
        assert_eq!(cm.mcc(), None);
        assert_eq!(ConfusionMatrix::new(0, 2, 3, 0).f1(), None);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert!(metrics_from_confusion(&ConfusionMatrix::default(), 0.5).is_err());
    }

    #[test]
    fn standard_fpr() {
        assert_eq!(ConfusionMatrix::new(5, 1, 2, 3).fpr(), Some(0.25));
    }

    #[test]
    fn mean_skips_undefined() {
        let a = metrics_from_confusion(&ConfusionMatrix::new(0, 0, 1, 1), 0.5).unwrap();
        let b = metrics_from_confusion(&ConfusionMatrix::new(1, 1, 0, 0), 0.5).unwrap();
        let m = EvalReport::mean(&[a, b]).unwrap();
        assert_eq!(m.precision, Some(0.5));
        assert_eq!(m.n, 4);
    }
}
