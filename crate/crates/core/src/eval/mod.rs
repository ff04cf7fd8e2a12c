//! Evaluation statistics: confusion-matrix metrics, ROC/AUC, inter-rater
//! agreement, rank correlation and misclassification export.

mod agreement;
mod correlation;
mod metrics;
mod misclass;
mod roc;

use std::path::Path;

pub use agreement::{cohen_kappa, AgreementBand, AgreementReport};
pub use correlation::{average_ranks, spearman_rho, CorrelationResult};
pub use metrics::{metrics_from_confusion, ConfusionMatrix, EvalReport};
pub use misclass::{export_misclassifications, tabulate_categories, CategoryTally, MisclassReport, MisclassRow, RowKind};
pub use roc::{auc, roc_curve, trapezoid_area, RocPoint};

use crate::error::{Error, Result};

/// Full report for scored predictions against gold labels.
pub fn evaluate(scores: &[f64], predicted: &[bool], gold: &[bool], threshold: f64) -> Result<EvalReport> {
    let cm = ConfusionMatrix::from_labels(predicted, gold)?;
    let mut report = metrics_from_confusion(&cm, threshold)?;
    report.auc = match auc(scores, gold) {
        Ok(a) => Some(a),
        Err(Error::AucUndefined(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(report)
}

pub fn write_report_csv(path: &Path, reports: &[EvalReport]) -> Result<()> {
    let mut text = String::from(EvalReport::CSV_HEADER);
    text.push('\n');
    for r in reports {
        text.push_str(&r.to_csv_row());
        text.push('\n');
    }
    crate::io::write_text(path, &text)
}

pub fn write_roc_csv(path: &Path, points: &[RocPoint]) -> Result<()> {
    use crate::io::fmt_f64;
    let mut text = String::from("threshold,fpr,tpr\n");
    for p in points {
        text.push_str(&format!("{},{},{}\n", fmt_f64(p.threshold), fmt_f64(p.fpr), fmt_f64(p.tpr)));
    }
    crate::io::write_text(path, &text)
}
