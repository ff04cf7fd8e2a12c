//! Every stage of the pipeline on the bundled mini-dump, through the library
//! API. Artifacts land in the given directory (default: a fresh temporary
//! one); gold labels come from a keyword rule standing in for annotators.
//!
//!     cargo run --release --example full_pipeline [-- workdir]

use std::fmt::Write as _;
use std::path::PathBuf;

use secmine::corpus::read_sentences;
use secmine::pipeline::{Pipeline, PipelineConfig, SampleRequest};

const KEYWORDS: [&str; 8] = ["password", "tls", "ssl", "certificate", "attack", "encrypt", "token", "ssh"];

fn main() -> secmine::Result<()> {
    let workdir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("secmine-pipeline-{}", std::process::id())));
    let config = PipelineConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/mini_pipeline.toml").as_ref())?;
    let p = Pipeline::new(&workdir, config)?;

    let tags = p.tags()?;
    println!("tags: {} candidates, {} selected", tags.candidate_tags, tags.selected_tags);
    let stats = p.ingest(false)?;
    println!("ingest: {} questions, {} accepted answers", stats.questions_kept, stats.accepted_answers_kept);
    println!("sentences: {}", p.sentences()?.sentences);
    println!("sample: {} drawn", p.sample(&SampleRequest::default())?.drawn);

    let mut gold = String::from("id,label\n");
    for s in read_sentences(&workdir.join("sentences.jsonl"))? {
        let lower = s.text.to_lowercase();
        writeln!(gold, "{},{}", s.id, u8::from(KEYWORDS.iter().any(|k| lower.contains(k)))).unwrap();
    }
    let labels = workdir.join("keyword_gold.csv");
    std::fs::write(&labels, gold).map_err(|e| secmine::Error::InvalidInput(e.to_string()))?;

    let train = p.train(Some(&labels))?;
    println!("train: {} examples, chosen {:?}, CV F1 {:?}", train.examples, train.chosen, train.cv_mean.f1);
    let predict = p.predict()?;
    println!("predict: {} of {} flagged", predict.predicted_positive, predict.sentences);
    let eval = p.eval(None, Some(&labels))?;
    println!("eval: F1 {:?}, AUC {:?}", eval.report.f1, eval.report.auc);
    let topics = p.topics()?;
    println!("topics: k = {} (c_v {:.3}) over {} sentences", topics.best_k, topics.coherence, topics.documents);
    let trends = p.trends()?;
    println!("trends: {} buckets, discoverability {:?}", trends.buckets, trends.discoverability);
    p.report()?;
    println!("\nartifacts and report.md in {}", workdir.display());
    Ok(())
}
