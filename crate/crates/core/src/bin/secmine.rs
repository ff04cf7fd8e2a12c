use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use secmine::classify::ModelKind;
use secmine::pipeline::{Pipeline, PipelineConfig, SampleRequest, TopicCorpus};
use secmine::{Error, Result};

/// Mine security-related sentences from Stack Overflow data dumps.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Directory holding every artifact.
    #[arg(long, global = true, default_value = ".")]
    workdir: PathBuf,
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap on worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract questions with a selected tag and their accepted answers.
    Ingest {
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Keep questions regardless of tags.
        #[arg(long)]
        all_tags: bool,
    },
    /// Compute tag significance/relevance and select the tag set.
    Tags {
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        seed_tags: Option<Vec<String>>,
    },
    /// Split post bodies into sentences.
    Sentences,
    /// Draw sentences for annotation.
    Sample(SampleArgs),
    /// Agreement between two raters' label files.
    Agreement {
        #[arg(long)]
        rater_a: PathBuf,
        #[arg(long)]
        rater_b: PathBuf,
        /// Disagreement file with the `resolved` column filled in.
        #[arg(long)]
        adjudicated: Option<PathBuf>,
    },
    /// Cross-validate over the grid and fit the final model.
    Train {
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        model_kind: Option<ModelKind>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score every sentence with the trained model.
    Predict {
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Evaluate a predictions file against gold labels.
    Eval {
        #[arg(long)]
        pred: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Fit topic models over the K grid and export the most coherent one.
    Topics {
        #[arg(long, value_delimiter = ',')]
        k_grid: Option<Vec<usize>>,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long)]
        burn_in: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// `security` (predicted positives) or `all`.
        #[arg(long, value_parser = parse_corpus)]
        corpus: Option<TopicCorpus>,
    },
    /// Topic evolution, popularity/difficulty and discoverability tables.
    Trends {
        #[arg(long, value_delimiter = ',')]
        security_tags: Option<Vec<String>>,
    },
    /// Summarize existing artifacts as JSON and Markdown.
    Report,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Judgmental sample: number of predicted positives to draw.
    #[arg(long, requires = "negatives")]
    positives: Option<usize>,
    /// Judgmental sample: number of predicted negatives to draw.
    #[arg(long, requires = "positives")]
    negatives: Option<usize>,
    /// Label files whose ids are excluded from the draw.
    #[arg(long)]
    exclude: Vec<PathBuf>,
}

fn parse_corpus(s: &str) -> std::result::Result<TopicCorpus, String> {
    match s {
        "security" => Ok(TopicCorpus::Security),
        "all" => Ok(TopicCorpus::All),
        other => Err(format!("expected `security` or `all`, got `{other}`")),
    }
}

fn print<T: Serialize>(value: T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    apply_overrides(&mut cfg, &cli.command);
    let p = Pipeline::new(&cli.workdir, cfg)?;

    match cli.command {
        Command::Ingest { all_tags, .. } => print(p.ingest(all_tags)?),
        Command::Tags { .. } => print(p.tags()?),
        Command::Sentences => print(p.sentences()?),
        Command::Sample(a) => print(p.sample(&SampleRequest {
            judgmental: a.positives.zip(a.negatives),
            size: a.size,
            seed: a.seed,
            exclude: a.exclude,
        })?),
        Command::Agreement {
            rater_a,
            rater_b,
            adjudicated,
        } => print(p.agreement(&rater_a, &rater_b, adjudicated.as_deref())?),
        Command::Train { labels, .. } => print(p.train(labels.as_deref())?),
        Command::Predict { .. } => print(p.predict()?),
        Command::Eval { pred, labels, .. } => print(p.eval(pred.as_deref(), labels.as_deref())?),
        Command::Topics { .. } => print(p.topics()?),
        Command::Trends { .. } => print(p.trends()?),
        Command::Report => {
            p.report()?;
            print(json!({ "written": ["report.json", "report.md"] }))
        }
    }
}

fn apply_overrides(cfg: &mut PipelineConfig, command: &Command) {
    fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
        if let Some(v) = value {
            *slot = v.clone();
        }
    }
    match command {
        Command::Ingest { dump, .. } => {
            if dump.is_some() {
                cfg.ingest.dump_path = dump.clone();
            }
        }
        Command::Tags { dump, mu, nu, seed_tags } => {
            if dump.is_some() {
                cfg.ingest.dump_path = dump.clone();
            }
            set(&mut cfg.tags.mu, mu);
            set(&mut cfg.tags.nu, nu);
            set(&mut cfg.tags.seed_tags, seed_tags);
        }
        Command::Train {
            model_kind, folds, seed, ..
        } => {
            set(&mut cfg.classify.model_kind, model_kind);
            set(&mut cfg.classify.folds, folds);
            set(&mut cfg.classify.seed, seed);
        }
        Command::Predict { threshold } | Command::Eval { threshold, .. } => {
            set(&mut cfg.classify.threshold, threshold);
        }
        Command::Topics {
            k_grid,
            iterations,
            burn_in,
            seed,
            corpus,
        } => {
            set(&mut cfg.topics.k_grid, k_grid);
            set(&mut cfg.topics.iterations, iterations);
            set(&mut cfg.topics.burn_in, burn_in);
            set(&mut cfg.topics.seed, seed);
            set(&mut cfg.topics.corpus, corpus);
        }
        Command::Trends { security_tags } => set(&mut cfg.trends.security_tags, security_tags),
        Command::Sentences | Command::Sample(_) | Command::Agreement { .. } | Command::Report => {}
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
            if let Error::MissingArtifact { stage, path } = &e {
                err["missing_stage"] = json!(stage);
                err["path"] = json!(path);
            }
            eprintln!("{}", json!({ "error": err }));
            ExitCode::FAILURE
        }
    }
}
