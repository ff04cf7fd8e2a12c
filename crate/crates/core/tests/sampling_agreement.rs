//! Annotation sampling and two-rater agreement, driven through files as an
//! annotation round would be.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use chrono::{TimeZone, Utc};
use secmine::classify::{Prediction, DEFAULT_THRESHOLD};
use secmine::corpus::{Sentence, SentenceId};
use secmine::eval::AgreementBand;
use secmine::sampling::{
    draw_sample, merge_annotations, read_labels, resolve_gold, write_disagreements, SamplePlan,
};
use secmine::Error;

fn sentences(n: u64) -> Vec<Sentence> {
    (1..=n)
        .map(|i| Sentence {
            id: SentenceId::new(100 + i / 3, (i % 3) as u32),
            post_id: 100 + i / 3,
            text: format!("sentence number {i}"),
            created_at: Utc.with_ymd_and_hms(2016, 1, 1, 0, 0, 0).unwrap(),
            tags: vec!["iot".into()],
            is_question: i % 2 == 0,
        })
        .collect()
}

fn write_rater(path: &Path, rows: &[(SentenceId, bool)]) {
    let mut text = String::from("id,label\n");
    for (id, y) in rows {
        writeln!(text, "{id},{}", u8::from(*y)).unwrap();
    }
    std::fs::write(path, text).unwrap();
}

/// 20 items: both yes on 8, both no on 9, A-only yes on 2, B-only yes on 1.
fn twenty_item_round(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let ids: Vec<SentenceId> = (0..20).map(|i| SentenceId::new(500 + i, 0)).collect();
    let pairs: Vec<(bool, bool)> = std::iter::repeat_n((true, true), 8)
        .chain(std::iter::repeat_n((false, false), 9))
        .chain(std::iter::repeat_n((true, false), 2))
        .chain(std::iter::once((false, true)))
        .collect();
    let a: Vec<_> = ids.iter().zip(&pairs).map(|(&id, &(x, _))| (id, x)).collect();
    // rater B's file lists the items in reverse order
    let b: Vec<_> = ids.iter().zip(&pairs).map(|(&id, &(_, y))| (id, y)).rev().collect();
    let (pa, pb) = (dir.join("a.csv"), dir.join("b.csv"));
    write_rater(&pa, &a);
    write_rater(&pb, &b);
    (pa, pb)
}

#[test]
fn twenty_item_round_gives_known_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = twenty_item_round(dir.path());
    let merged = merge_annotations(&a, &b).unwrap();
    // p_o = 17/20; p_e = (10*9 + 10*11) / 400 = 0.5
    assert_eq!(merged.report.percent, 0.85);
    assert_eq!(merged.report.kappa, Some(0.7));
    assert_eq!(merged.report.band(), Some(AgreementBand::Substantial));
    assert_eq!(merged.report.contingency, [[9, 1], [2, 8]]);
    assert_eq!(merged.disagreements.len(), 3);
}

#[test]
fn adjudication_fills_in_the_disagreements() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = twenty_item_round(dir.path());
    let merged = merge_annotations(&a, &b).unwrap();
    let sheet = dir.path().join("disagreements.csv");
    write_disagreements(&sheet, &merged.disagreements).unwrap();

    let (la, lb) = (read_labels(&a).unwrap(), read_labels(&b).unwrap());
    // unresolved sheet is rejected
    assert!(matches!(resolve_gold(&la, &lb, &sheet), Err(Error::Format { .. })));

    // the adjudicator marks every disagreement as security-related
    let filled: String = std::fs::read_to_string(&sheet)
        .unwrap()
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 0 { format!("{l}\n") } else { format!("{l}1\n") })
        .collect();
    std::fs::write(&sheet, filled).unwrap();
    let gold = resolve_gold(&la, &lb, &sheet).unwrap();
    assert_eq!(gold.len(), 20);
    assert_eq!(gold.values().filter(|&&y| y).count(), 8 + 3);

    // a sheet that drops one disagreement does not cover the set
    let partial: String = std::fs::read_to_string(&sheet).unwrap().lines().take(3).map(|l| format!("{l}\n")).collect();
    std::fs::write(&sheet, partial).unwrap();
    assert!(matches!(resolve_gold(&la, &lb, &sheet), Err(Error::IdMismatch(_))));
}

#[test]
fn raters_must_label_the_same_items() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_rater(&a, &[(SentenceId::new(1, 0), true), (SentenceId::new(1, 1), false)]);
    write_rater(&b, &[(SentenceId::new(1, 0), true), (SentenceId::new(2, 0), false)]);
    match merge_annotations(&a, &b) {
        Err(Error::IdMismatch(ids)) => assert_eq!(ids, ["1-1", "2-0"]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn a_second_round_never_redraws_labeled_items() {
    let pool = sentences(300);
    let first = draw_sample(&pool, &SamplePlan::random(100, 1), None).unwrap();
    let mut plan = SamplePlan::random(150, 2);
    plan.exclude_ids = first.iter().copied().collect();
    let second = draw_sample(&pool, &plan, None).unwrap();

    let allowed: BTreeSet<SentenceId> = pool.iter().map(|s| s.id).filter(|id| !plan.exclude_ids.contains(id)).collect();
    assert_eq!(second.len(), 150);
    assert!(second.iter().all(|id| allowed.contains(id)));
    assert_eq!(second.iter().collect::<BTreeSet<_>>().len(), 150);
    assert!(second.windows(2).all(|w| w[0] < w[1]), "ids come back sorted");

    // 200 unlabeled items remain
    plan.size = 201;
    assert!(matches!(draw_sample(&pool, &plan, None), Err(Error::InsufficientPopulation { .. })));
}

#[test]
fn draws_are_reproducible_per_seed() {
    let pool = sentences(120);
    let a = draw_sample(&pool, &SamplePlan::random(40, 9), None).unwrap();
    assert_eq!(a, draw_sample(&pool, &SamplePlan::random(40, 9), None).unwrap());
    assert_ne!(a, draw_sample(&pool, &SamplePlan::random(40, 10), None).unwrap());
}

#[test]
fn judgmental_sample_takes_each_predicted_class() {
    let pool = sentences(60);
    let preds: Vec<Prediction> = pool
        .iter()
        .enumerate()
        .map(|(i, s)| Prediction::new(s.id, if i % 4 == 0 { 0.9 } else { 0.1 }, DEFAULT_THRESHOLD))
        .collect();
    let drawn = draw_sample(&pool, &SamplePlan::judgmental(10, 20, 5), Some(&preds)).unwrap();
    let positive: BTreeSet<SentenceId> = preds.iter().filter(|p| p.label).map(|p| p.sentence_id).collect();
    assert_eq!(drawn.iter().filter(|id| positive.contains(id)).count(), 10);
    assert_eq!(drawn.len(), 30);

    // 15 predicted positives exist
    match draw_sample(&pool, &SamplePlan::judgmental(16, 5, 5), Some(&preds)) {
        Err(Error::InsufficientPopulation { stratum, requested, available }) => {
            assert_eq!((stratum.as_str(), requested, available), ("predicted-positive", 16, 15));
        }
        other => panic!("{other:?}"),
    }
}
