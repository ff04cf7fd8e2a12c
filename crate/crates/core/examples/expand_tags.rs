//! Grow a seed tag set with the tags that co-occur with it: a tag is kept
//! when enough of its questions are seeded (significance) and enough seeded
//! questions carry it (relevance).
//!
//!     cargo run --example expand_tags [-- path/to/Posts.xml mu nu]

use std::path::PathBuf;

use secmine::ingest::scan_question_tags;
use secmine::tagset::{compute_tag_stats, passes_thresholds, select_final_tags, TagSetConfig};

fn main() -> secmine::Result<()> {
    let mut args = std::env::args().skip(1);
    let dump = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini_dump.xml")));
    let mut cfg = TagSetConfig::default();
    if let (Some(mu), Some(nu)) = (args.next(), args.next()) {
        cfg.mu_threshold = mu.parse().expect("mu is a number");
        cfg.nu_threshold = nu.parse().expect("nu is a number");
    }

    let mut questions = Vec::new();
    scan_question_tags(&dump, |tags| questions.push(tags.to_vec()))?;
    let mut stats = compute_tag_stats(&questions, &cfg)?;
    stats.sort_by(|a, b| b.count_in_p.cmp(&a.count_in_p).then_with(|| a.tag.cmp(&b.tag)));

    println!("{} questions; seeds {:?}", questions.len(), cfg.seed_tags);
    println!("{:<16} {:>5} {:>5} {:>6} {:>6}", "tag", "in P", "all", "mu", "nu");
    for s in &stats {
        let mark = if passes_thresholds(s, &cfg) { "*" } else { "" };
        println!(
            "{:<16} {:>5} {:>5} {:>6.3} {:>6.3} {mark}",
            s.tag, s.count_in_p, s.count_in_dump, s.significance_mu, s.relevance_nu
        );
    }
    println!("\nselected: {:?}", select_final_tags(&stats, &cfg));
    Ok(())
}
