//! Tag-set expansion against hand-built and brute-force fixtures.

mod common;

use std::collections::BTreeSet;

use secmine::tagset::{compute_tag_stats, passes_thresholds, select_final_tags, TagSetConfig};

fn tags(list: &[&str]) -> Vec<String> {
    list.iter().map(|t| t.to_string()).collect()
}

/// 20 candidate tags co-occurring with the seed `iot` in 100 seeded
/// questions; candidate `c{i}` appears on `p_i` seeded questions and `d_i`
/// questions overall. Exactly c00..c06 reach mu >= 0.3 and nu >= 0.05.
#[test]
fn exactly_seven_of_twenty_candidates_pass() {
    // (in P, outside P)
    let plan: [(usize, usize); 20] = [
        (10, 0),
        (5, 5),
        (6, 14),
        (30, 70),
        (5, 11),
        (50, 10),
        (9, 21),
        (4, 0),
        (2, 1),
        (10, 24),
        (6, 15),
        (40, 100),
        (1, 0),
        (3, 0),
        (20, 50),
        (12, 30),
        (5, 12),
        (4, 1),
        (30, 71),
        (7, 17),
    ];
    let mut questions: Vec<Vec<String>> = (0..100).map(|_| tags(&["iot"])).collect();
    for (i, &(in_p, outside)) in plan.iter().enumerate() {
        let name = format!("c{i:02}");
        for q in questions.iter_mut().take(in_p) {
            q.push(name.clone());
        }
        for _ in 0..outside {
            questions.push(vec![name.clone(), "other".into()]);
        }
    }
    let cfg = TagSetConfig {
        seed_tags: tags(&["iot"]),
        seed_substring: None,
        mu_threshold: 0.3,
        nu_threshold: 0.05,
    };
    let stats = compute_tag_stats(&questions, &cfg).unwrap();
    assert_eq!(stats.len(), 21);

    let brute: BTreeSet<String> = plan
        .iter()
        .enumerate()
        .filter(|&(_, &(p, o))| p as f64 / (p + o) as f64 >= 0.3 && p as f64 / 100.0 >= 0.05)
        .map(|(i, _)| format!("c{i:02}"))
        .collect();
    let want: BTreeSet<String> = (0..7).map(|i| format!("c{i:02}")).collect();
    assert_eq!(brute, want, "fixture plan");

    let passing: BTreeSet<String> =
        stats.iter().filter(|s| passes_thresholds(s, &cfg) && s.tag != "iot").map(|s| s.tag.clone()).collect();
    assert_eq!(passing, want);
    let mut with_seed = want.clone();
    with_seed.insert("iot".into());
    assert_eq!(select_final_tags(&stats, &cfg), with_seed);
}

#[test]
fn thousand_question_dump_matches_nested_loop_counts() {
    let questions = common::synthetic_tag_lists(1000, 99);
    let cfg = TagSetConfig::default();
    let stats = compute_tag_stats(&questions, &cfg).unwrap();
    let (oracle, p_size) = common::brute_force_tag_counts(&questions, |t| cfg.is_seed(t));
    assert_eq!(stats.len(), oracle.len());
    for s in &stats {
        assert_eq!((s.count_in_p, s.count_in_dump), oracle[&s.tag], "{}", s.tag);
        assert_eq!(s.relevance_nu, s.count_in_p as f64 / p_size as f64);
    }
}

#[test]
fn scaling_counts_keeps_significance() {
    let base = vec![tags(&["iot", "mqtt"]), tags(&["mqtt"]), tags(&["mqtt", "css"])];
    let tripled: Vec<Vec<String>> = base.iter().cycle().take(9).cloned().collect();
    let cfg = TagSetConfig::default();
    let mu = |qs: &[Vec<String>]| {
        compute_tag_stats(qs, &cfg).unwrap().into_iter().find(|s| s.tag == "mqtt").unwrap().significance_mu
    };
    assert_eq!(mu(&base), mu(&tripled));
}
