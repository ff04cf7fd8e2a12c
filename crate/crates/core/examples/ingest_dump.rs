//! Stream a `Posts.xml` dump and keep the questions carrying a selected tag
//! together with their accepted answers.
//!
//!     cargo run --example ingest_dump [-- path/to/Posts.xml]

use std::collections::BTreeSet;
use std::path::PathBuf;

use secmine::ingest::parse_dump;

fn main() -> secmine::Result<()> {
    let dump = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini_dump.xml")));

    let tags: BTreeSet<String> = ["iot", "mqtt", "arduino", "esp8266", "raspberry-pi"].map(String::from).into();
    let (posts, stats) = parse_dump(&dump, Some(&tags))?;

    println!(
        "{} rows: {} questions, {} accepted answers kept, {} skipped",
        stats.total_rows, stats.questions_kept, stats.accepted_answers_kept, stats.rows_skipped
    );
    for post in posts.iter().take(3) {
        println!("\n#{} {:?} {:?} {}", post.id, post.kind, post.tags, post.created_at.date_naive());
        println!("  {}", post.body_text.chars().take(160).collect::<String>());
    }
    Ok(())
}
