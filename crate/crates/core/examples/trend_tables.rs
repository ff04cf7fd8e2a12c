//! Half-year topic counts, monthly share of security sentences, topic
//! popularity/difficulty and tag discoverability on a small hand-made set.
//!
//!     cargo run --example trend_tables

use std::collections::BTreeMap;

use chrono::{TimeZone, Utc};
use secmine::corpus::{Sentence, SentenceId};
use secmine::ingest::{Post, PostKind};
use secmine::trends::{
    absolute_impact, default_security_tags, discoverability, monthly_counts, popularity_difficulty,
    relative_growth, Granularity,
};

/// Post id, month in 2018, tags, views, has an accepted answer, topic of each sentence.
type Question = (u64, u32, &'static [&'static str], u64, bool, &'static [usize]);

fn main() -> secmine::Result<()> {
    let raw: [Question; 5] = [
        (1, 2, &["iot", "ssl"], 120, true, &[0, 0]),
        (2, 3, &["mqtt"], 40, false, &[1]),
        (3, 8, &["iot", "security"], 300, false, &[0, 1]),
        (4, 9, &["arduino"], 15, true, &[1, 1, 1]),
        (5, 11, &["esp8266"], 75, false, &[0]),
    ];
    let mut posts = Vec::new();
    let mut sentences = Vec::new();
    let mut assignments = BTreeMap::new();
    for &(id, month, tags, views, accepted, topics) in &raw {
        let created_at = Utc.with_ymd_and_hms(2018, month, 10, 9, 0, 0).unwrap();
        let tags: Vec<String> = tags.iter().map(|t| t.to_string()).collect();
        posts.push(Post {
            id,
            kind: PostKind::Question,
            parent_id: None,
            created_at,
            tags: tags.clone(),
            body_html: String::new(),
            body_text: String::new(),
            view_count: Some(views),
            has_accepted_answer: Some(accepted),
        });
        for (seq, &topic) in topics.iter().enumerate() {
            let sid = SentenceId::new(id, seq as u32);
            sentences.push(Sentence { id: sid, post_id: id, text: String::new(), created_at, tags: tags.clone(), is_question: true });
            assignments.insert(sid, topic);
        }
    }

    println!("bucket      topic count");
    for b in absolute_impact(&assignments, &sentences, None, Granularity::Topic)? {
        println!("{} {:>5} {:>5}", b.bucket_start, b.group, b.count);
    }

    // pretend topic 0 holds the security sentences
    let security: Vec<Sentence> = sentences.iter().filter(|s| assignments[&s.id] == 0).cloned().collect();
    println!("\nmonth    share");
    for p in relative_growth(&monthly_counts(&security), &monthly_counts(&sentences))?.points {
        println!("{} {:.2}", p.month, p.ratio);
    }

    println!("\ntopic questions avg_views unanswered");
    for r in popularity_difficulty(&assignments, &sentences, &posts, 2)? {
        println!("{:>5} {:>9} {:>9.1} {:>10.2}", r.topic, r.question_count, r.avg_view_count.unwrap_or(f64::NAN), r.pct_without_accepted.unwrap_or(f64::NAN));
    }

    let found = discoverability(&security, &default_security_tags())?;
    println!("\nsecurity sentences reachable through security tags: {found:?}");
    Ok(())
}
