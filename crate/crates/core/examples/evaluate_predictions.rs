//! Threshold metrics, ROC curve and AUC for scored predictions.
//!
//!     cargo run --example evaluate_predictions

use secmine::eval::{auc, evaluate, roc_curve};

fn main() -> secmine::Result<()> {
    let scores = [0.95, 0.91, 0.80, 0.74, 0.66, 0.52, 0.47, 0.33, 0.21, 0.08];
    let gold = [true, true, false, true, true, false, true, false, false, false];
    let threshold = 0.5;
    let predicted: Vec<bool> = scores.iter().map(|&s| s >= threshold).collect();

    let report = evaluate(&scores, &predicted, &gold, threshold)?;
    println!("precision {:?}", report.precision);
    println!("recall    {:?}", report.recall);
    println!("F1        {:?}", report.f1);
    println!("accuracy  {:?}", report.accuracy);
    println!("MCC       {:?}", report.mcc);
    println!("AUC       {:?} (rank statistic {})", report.auc, auc(&scores, &gold)?);

    println!("\nthreshold    FPR    TPR");
    for p in roc_curve(&scores, &gold)? {
        println!("{:>9.2} {:>6.2} {:>6.2}", p.threshold, p.fpr, p.tpr);
    }
    Ok(())
}
