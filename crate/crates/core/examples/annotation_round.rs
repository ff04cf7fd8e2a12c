//! One annotation round: draw a reproducible sample, compare two raters,
//! adjudicate their disagreements and derive gold labels.
//!
//!     cargo run --example annotation_round

use std::fmt::Write as _;

use chrono::DateTime;
use secmine::corpus::{Sentence, SentenceId};
use secmine::sampling::{draw_sample, merge_labels, resolve_gold, write_disagreements, Labels, SamplePlan};

fn main() -> secmine::Result<()> {
    let sentences: Vec<Sentence> = (1..=500)
        .map(|i| Sentence {
            id: SentenceId::new(i, 0),
            post_id: i,
            text: format!("sentence {i}"),
            created_at: DateTime::UNIX_EPOCH,
            tags: Vec::new(),
            is_question: true,
        })
        .collect();

    let ids = draw_sample(&sentences, &SamplePlan::random(30, 42), None)?;
    let head: Vec<String> = ids.iter().take(3).map(ToString::to_string).collect();
    println!("drew {} sentences, first {}", ids.len(), head.join(", "));

    // two raters who mostly agree
    let rater_a: Labels = ids.iter().map(|&id| (id, id.post % 3 == 0)).collect();
    let rater_b: Labels = ids.iter().enumerate().map(|(i, &id)| (id, (id.post % 3 == 0) != (i % 10 == 4))).collect();
    let merged = merge_labels(&rater_a, &rater_b)?;
    println!(
        "agreement {:.2}, kappa {:?} ({:?}), {} disagreements",
        merged.report.percent,
        merged.report.kappa,
        merged.report.band(),
        merged.disagreements.len()
    );

    // the adjudicator fills in the `resolved` column
    let dir = std::env::temp_dir().join(format!("secmine-annotation-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| secmine::Error::InvalidInput(e.to_string()))?;
    let sheet = dir.join("disagreements.csv");
    write_disagreements(&sheet, &merged.disagreements)?;
    let mut resolved = String::from("id,label_a,label_b,resolved\n");
    for d in &merged.disagreements {
        writeln!(resolved, "{},{},{},1", d.id, u8::from(d.label_a), u8::from(d.label_b)).unwrap();
    }
    std::fs::write(&sheet, resolved).map_err(|e| secmine::Error::InvalidInput(e.to_string()))?;

    let gold = resolve_gold(&rater_a, &rater_b, &sheet)?;
    println!("gold labels: {} ({} positive)", gold.len(), gold.values().filter(|&&y| y).count());

    // a second round skips everything already labeled
    let mut next = SamplePlan::random(30, 43);
    next.exclude_ids = gold.keys().copied().collect();
    let second = draw_sample(&sentences, &next, None)?;
    assert!(second.iter().all(|id| !gold.contains_key(id)));
    println!("second round drew {} new sentences", second.len());
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
