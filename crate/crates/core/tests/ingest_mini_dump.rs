//! Ingestion of the bundled 100-row mini-dump (`fixtures/mini_dump.xml`).
//! Its rows were counted by hand: 60 IoT questions, 25 accepted answers of
//! those questions and 15 rows that must be skipped.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secmine::ingest::{parse_dump, read_posts, write_posts, PostKind, MAX_TAGS};
use secmine::tagset::{compute_tag_stats, select_final_tags, TagSetConfig};

fn selected_tags() -> BTreeSet<String> {
    let mut questions = Vec::new();
    secmine::ingest::scan_question_tags(common::MINI_DUMP.as_ref(), |t| questions.push(t.to_vec())).unwrap();
    let cfg = TagSetConfig::default();
    select_final_tags(&compute_tag_stats(&questions, &cfg).unwrap(), &cfg)
}

#[test]
fn hand_counted_statistics() {
    let (posts, stats) = parse_dump(common::MINI_DUMP.as_ref(), Some(&selected_tags())).unwrap();
    assert_eq!(stats.total_rows, 100);
    assert_eq!(stats.questions_kept, 60);
    assert_eq!(stats.accepted_answers_kept, 25);
    assert_eq!(stats.rows_skipped, 15);
    assert_eq!(posts.len(), 85);
}

#[test]
fn without_a_filter_off_topic_questions_and_their_answer_are_kept() {
    let (_, stats) = parse_dump(common::MINI_DUMP.as_ref(), None).unwrap();
    assert_eq!(stats.questions_kept, 63);
    assert_eq!(stats.accepted_answers_kept, 26);
    assert_eq!(stats.total_rows, stats.questions_kept + stats.accepted_answers_kept + stats.rows_skipped);
}

#[test]
fn retained_posts_satisfy_their_invariants() {
    let (posts, _) = parse_dump(common::MINI_DUMP.as_ref(), Some(&selected_tags())).unwrap();
    let questions: BTreeMap<u64, &secmine::ingest::Post> =
        posts.iter().filter(|p| p.is_question()).map(|p| (p.id, p)).collect();
    for p in &posts {
        assert!(!p.tags.is_empty() && p.tags.len() <= MAX_TAGS, "post {}", p.id);
        assert!(!p.body_text.contains('<') && !p.body_text.contains('>'), "markup left in {}", p.id);
        assert!(!p.body_text.contains("http"), "URL left in {}", p.id);
        assert!(!p.body_text.contains("digitalWrite") && !p.body_text.contains("systemctl"), "code left in {}", p.id);
        match p.kind {
            PostKind::Question => {
                assert!(p.parent_id.is_none() && p.view_count.is_some() && p.has_accepted_answer.is_some());
            }
            PostKind::AcceptedAnswer => {
                let parent = questions[&p.parent_id.expect("answers name their question")];
                assert_eq!(parent.tags, p.tags, "answer {} inherits its question's tags", p.id);
                assert_eq!(parent.has_accepted_answer, Some(true));
                assert!(p.view_count.is_none());
            }
        }
    }
}

#[test]
fn row_order_does_not_change_the_result() {
    let text = std::fs::read_to_string(common::MINI_DUMP).unwrap();
    let mut rows: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with("<row")).collect();
    rows.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
    let dir = tempfile::tempdir().unwrap();
    let shuffled = dir.path().join("Posts.xml");
    std::fs::write(&shuffled, format!("<posts>\n{}\n</posts>\n", rows.join("\n"))).unwrap();

    let filter = selected_tags();
    let (a, sa) = parse_dump(common::MINI_DUMP.as_ref(), Some(&filter)).unwrap();
    let (b, sb) = parse_dump(&shuffled, Some(&filter)).unwrap();
    assert_eq!(sa, sb);
    let key = |posts: &[secmine::ingest::Post]| -> BTreeMap<u64, String> {
        posts.iter().map(|p| (p.id, serde_json::to_string(p).unwrap())).collect()
    };
    assert_eq!(key(&a), key(&b));
}

#[test]
fn post_file_round_trips() {
    let (posts, _) = parse_dump(common::MINI_DUMP.as_ref(), Some(&selected_tags())).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("posts.jsonl");
    write_posts(&path, &posts).unwrap();
    let back = read_posts(&path).unwrap();
    assert_eq!(back.len(), posts.len());
    for (a, b) in posts.iter().zip(&back) {
        assert_eq!((a.id, &a.body_text, &a.tags, a.created_at), (b.id, &b.body_text, &b.tags, b.created_at));
    }
    let first: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&path).unwrap().lines().next().unwrap()).unwrap();
    for field in ["id", "kind", "parent_id", "created_at", "tags", "body_text", "view_count", "has_accepted_answer"] {
        assert!(first.get(field).is_some(), "post file lacks `{field}`");
    }
}
