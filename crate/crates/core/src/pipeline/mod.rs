//! Stage orchestration over a working directory of artifacts.
//!
//! Each stage reads the artifacts of earlier stages from the working
//! directory, writes its own, and records a [`RunManifest`] under
//! `manifests/<stage>.json`. A stage whose input artifact is missing fails
//! with [`Error::MissingArtifact`] naming the stage that produces it.

pub mod config;
mod manifest;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{PipelineConfig, TopicCorpus};
pub use manifest::{FileDigest, RunManifest};
pub use report::{Report, ReportSection, Table};

use crate::classify::{cross_validate, load_predictions, write_predictions, Classifier, HyperParams, Prediction};
use crate::corpus::{
    build_vocab, read_sentences, sentences_from_posts, write_sentences, Profile, Sentence, SentenceId,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate, export_misclassifications, roc_curve, write_roc_csv, AgreementBand, AgreementReport, EvalReport};
use crate::ingest::{parse_dump, read_posts, scan_question_tags, write_posts, DumpStats};
use crate::io::{fmt_f64, read_json, write_json};
use crate::sampling::{
    draw_sample, merge_annotations, read_labels, resolve_gold, write_annotation_sheet, write_disagreements, write_labels,
    Labels, SampleMode, SamplePlan,
};
use crate::tagset::{compute_tag_stats, read_selected_tags, select_final_tags, write_tag_csv};
use crate::topics::{
    dominant_assignments, labeling_sample, read_assignments, select_k, write_assignments, write_coherence_csv,
    write_labeling_csv, write_matrix, write_model_summary, TopicModelSummary,
};
use crate::trends::{
    absolute_impact, discoverability, monthly_counts, popularity_difficulty, relative_growth, write_growth_csv,
    write_popularity_csv, write_trend_csv, Granularity,
};

/// A named file in the working directory and the stage that writes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Artifact {
    pub file: &'static str,
    pub stage: &'static str,
}

macro_rules! artifacts {
    ($($name:ident = $file:literal by $stage:literal;)*) => {
        $(pub const $name: Artifact = Artifact { file: $file, stage: $stage };)*
    };
}

artifacts! {
    TAGS = "tags.csv" by "tags";
    POSTS = "posts.jsonl" by "ingest";
    INGEST_STATS = "ingest_stats.json" by "ingest";
    SENTENCES = "sentences.jsonl" by "sentences";
    SAMPLE = "sample.csv" by "sample";
    AGREEMENT = "agreement.json" by "agreement";
    DISAGREEMENTS = "disagreements.csv" by "agreement";
    LABELS = "labels.csv" by "agreement";
    CV = "cv.json" by "train";
    CV_REPORT = "cv_report.csv" by "train";
    MODEL = "model.json" by "train";
    PREDICTIONS = "predictions.jsonl" by "predict";
    EVAL = "eval.json" by "eval";
    ROC = "roc.csv" by "eval";
    MISCLASSIFIED = "misclassified.csv" by "eval";
    TOPIC_VOCAB = "topic_vocab.tsv" by "topics";
    TOPIC_MODEL = "topic_model.json" by "topics";
    THETA = "theta.bin" by "topics";
    COHERENCE = "coherence.csv" by "topics";
    ASSIGNMENTS = "assignments.csv" by "topics";
    TOPIC_SAMPLES = "topic_samples.csv" by "topics";
    TREND_TOPICS = "trend_topics.csv" by "trends";
    TREND_CATEGORIES = "trend_categories.csv" by "trends";
    GROWTH = "growth.csv" by "trends";
    POPULARITY = "popularity.csv" by "trends";
    DISCOVERABILITY = "discoverability.json" by "trends";
    REPORT_JSON = "report.json" by "report";
    REPORT_MD = "report.md" by "report";
}

pub const MANIFEST_DIR: &str = "manifests";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagsSummary {
    pub questions_scanned: usize,
    pub candidate_tags: usize,
    pub selected_tags: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencesSummary {
    pub posts: usize,
    pub sentences: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleRequest {
    /// `(positives, negatives)` for a judgmental sample; random otherwise.
    pub judgmental: Option<(usize, usize)>,
    pub size: Option<usize>,
    pub seed: Option<u64>,
    /// Label files whose ids must not be drawn again.
    pub exclude: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub mode: SampleMode,
    pub drawn: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementOutput {
    pub n: u64,
    pub kappa: Option<f64>,
    pub percent: f64,
    pub band: Option<AgreementBand>,
    pub contingency: [[u64; 2]; 2],
    pub disagreements: usize,
    pub gold_labels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub examples: usize,
    pub positives: usize,
    pub chosen: HyperParams,
    pub cv_mean: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictSummary {
    pub sentences: usize,
    pub predicted_positive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub report: EvalReport,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// Gold ids with no prediction; excluded from the metrics.
    pub labels_without_prediction: usize,
    /// Predictions with no gold label; excluded from the metrics.
    pub predictions_without_label: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsSummary {
    pub documents: usize,
    pub dropped_empty: usize,
    pub vocab_size: usize,
    pub best_k: usize,
    pub coherence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoverabilityOutput {
    pub security_sentences: usize,
    pub security_tags: Vec<String>,
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendsSummary {
    pub assigned_sentences: usize,
    pub buckets: usize,
    pub months: usize,
    pub months_omitted: usize,
    pub discoverability: Option<f64>,
}

/// A pipeline bound to a working directory and an effective configuration.
pub struct Pipeline {
    workdir: PathBuf,
    config: PipelineConfig,
}

impl Pipeline {
    pub fn new(workdir: impl Into<PathBuf>, config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let workdir = workdir.into();
        std::fs::create_dir_all(workdir.join(MANIFEST_DIR)).map_err(|e| Error::io(&workdir, e))?;
        Ok(Self { workdir, config })
    }

    pub fn workdir(&self) -> &Path {
        &self.workdir
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn path(&self, artifact: Artifact) -> PathBuf {
        self.workdir.join(artifact.file)
    }

    fn require(&self, artifact: Artifact) -> Result<PathBuf> {
        let path = self.path(artifact);
        if path.is_file() {
            Ok(path)
        } else {
            Err(Error::MissingArtifact {
                path,
                stage: artifact.stage.to_string(),
            })
        }
    }

    fn require_file(&self, path: &Path, stage: &str) -> Result<PathBuf> {
        if path.is_file() {
            Ok(path.to_path_buf())
        } else {
            Err(Error::MissingArtifact {
                path: path.to_path_buf(),
                stage: stage.to_string(),
            })
        }
    }

    fn dump_path(&self) -> Result<PathBuf> {
        let path = self
            .config
            .ingest
            .dump_path
            .clone()
            .ok_or_else(|| Error::Config("ingest.dump_path is not set".into()))?;
        self.require_file(&path, "ingest (the Posts.xml dump)")
    }

    fn display(&self, path: &Path) -> String {
        path.strip_prefix(&self.workdir)
            .unwrap_or(path)
            .to_string_lossy()
            .replace('\\', "/")
    }

    fn record(&self, stage: &str, started: Instant, inputs: &[PathBuf], outputs: &[PathBuf], seed: Option<u64>) -> Result<()> {
        let digest = |p: &PathBuf| FileDigest::of(p, self.display(p));
        let manifest = RunManifest {
            stage: stage.to_string(),
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: inputs.iter().map(digest).collect::<Result<_>>()?,
            outputs: outputs.iter().map(digest).collect::<Result<_>>()?,
            config_hash: self.config.hash(),
            seed,
            threads: rayon::current_num_threads(),
            wall_time_ms: started.elapsed().as_millis(),
        };
        write_json(&self.workdir.join(MANIFEST_DIR).join(format!("{stage}.json")), &manifest)
    }

    /// Tag significance and relevance over every question of the dump, and
    /// the selected tag set.
    pub fn tags(&self) -> Result<TagsSummary> {
        let started = Instant::now();
        let dump = self.dump_path()?;
        let cfg = self.config.tags.tagset_config();
        let mut questions: Vec<Vec<String>> = Vec::new();
        scan_question_tags(&dump, |tags| questions.push(tags.to_vec()))?;
        let stats = compute_tag_stats(&questions, &cfg)?;
        let out = self.path(TAGS);
        write_tag_csv(&out, &stats, &cfg)?;
        self.record("tags", started, &[dump], &[out], None)?;
        Ok(TagsSummary {
            questions_scanned: questions.len(),
            candidate_tags: stats.len(),
            selected_tags: select_final_tags(&stats, &cfg).len(),
        })
    }

    /// Extract the questions carrying a selected tag and their accepted
    /// answers. With `all_tags`, no tag filter is applied.
    pub fn ingest(&self, all_tags: bool) -> Result<DumpStats> {
        let started = Instant::now();
        let dump = self.dump_path()?;
        let mut inputs = vec![dump.clone()];
        let filter: Option<BTreeSet<String>> = if all_tags {
            None
        } else {
            let tags = self.require(TAGS)?;
            inputs.push(tags.clone());
            Some(read_selected_tags(&tags)?)
        };
        let (posts, stats) = parse_dump(&dump, filter.as_ref())?;
        let (posts_out, stats_out) = (self.path(POSTS), self.path(INGEST_STATS));
        write_posts(&posts_out, &posts)?;
        write_json(&stats_out, &stats)?;
        self.record("ingest", started, &inputs, &[posts_out, stats_out], None)?;
        Ok(stats)
    }

    pub fn sentences(&self) -> Result<SentencesSummary> {
        let started = Instant::now();
        let input = self.require(POSTS)?;
        let posts = read_posts(&input)?;
        let sentences = sentences_from_posts(&posts);
        let out = self.path(SENTENCES);
        write_sentences(&out, &sentences)?;
        self.record("sentences", started, &[input], &[out], None)?;
        Ok(SentencesSummary {
            posts: posts.len(),
            sentences: sentences.len(),
        })
    }

    /// Draw sentences for annotation and write an annotation sheet.
    pub fn sample(&self, request: &SampleRequest) -> Result<SampleSummary> {
        let started = Instant::now();
        let sentences_path = self.require(SENTENCES)?;
        let sentences = read_sentences(&sentences_path)?;
        let mut inputs = vec![sentences_path];
        let seed = request.seed.unwrap_or(self.config.sample.seed);
        let mut plan = match request.judgmental {
            Some((pos, neg)) => SamplePlan::judgmental(pos, neg, seed),
            None => SamplePlan::random(request.size.unwrap_or(self.config.sample.size), seed),
        };
        for path in &request.exclude {
            let path = self.require_file(path, "agreement (an existing labels file)")?;
            plan.exclude_ids.extend(read_labels(&path)?.into_keys());
            inputs.push(path);
        }
        let predictions = if plan.mode == SampleMode::Judgmental {
            let path = self.require(PREDICTIONS)?;
            let p = load_predictions(&path, self.config.classify.threshold)?;
            inputs.push(path);
            Some(p)
        } else {
            None
        };
        let ids = draw_sample(&sentences, &plan, predictions.as_deref())?;
        let out = self.path(SAMPLE);
        write_annotation_sheet(&out, &ids, &sentences)?;
        self.record("sample", started, &inputs, &[out], Some(seed))?;
        Ok(SampleSummary {
            mode: plan.mode,
            drawn: ids.len(),
            seed,
        })
    }

    /// Agreement between two raters; with an adjudicated disagreement file,
    /// also the final gold labels.
    pub fn agreement(&self, rater_a: &Path, rater_b: &Path, adjudicated: Option<&Path>) -> Result<AgreementOutput> {
        let started = Instant::now();
        let a = self.require_file(rater_a, "annotation (rater A labels)")?;
        let b = self.require_file(rater_b, "annotation (rater B labels)")?;
        let merged = merge_annotations(&a, &b)?;
        let mut inputs = vec![a.clone(), b.clone()];
        let (report_out, disagreements_out) = (self.path(AGREEMENT), self.path(DISAGREEMENTS));
        write_disagreements(&disagreements_out, &merged.disagreements)?;
        let mut outputs = vec![report_out.clone(), disagreements_out];
        let gold_labels = match adjudicated {
            Some(adj) => {
                let adj = self.require_file(adj, "adjudication (resolved disagreements)")?;
                let gold = resolve_gold(&read_labels(&a)?, &read_labels(&b)?, &adj)?;
                let out = self.path(LABELS);
                write_labels(&out, &gold)?;
                inputs.push(adj);
                outputs.push(out);
                Some(gold.len())
            }
            None => None,
        };
        let AgreementReport {
            kappa,
            percent,
            contingency,
        } = merged.report.clone();
        let output = AgreementOutput {
            n: merged.report.n(),
            kappa,
            percent,
            band: merged.report.band(),
            contingency,
            disagreements: merged.disagreements.len(),
            gold_labels,
        };
        write_json(&report_out, &output)?;
        self.record("agreement", started, &inputs, &outputs, None)?;
        Ok(output)
    }

    fn labeled_docs(&self, sentences: &[Sentence], labels: &Labels) -> Result<(Vec<Vec<String>>, Vec<bool>)> {
        let by_id: BTreeMap<SentenceId, &Sentence> = sentences.iter().map(|s| (s.id, s)).collect();
        let missing: Vec<String> = labels.keys().filter(|id| !by_id.contains_key(id)).map(ToString::to_string).collect();
        if !missing.is_empty() {
            return Err(Error::IdMismatch(missing));
        }
        let tokenizer = self.config.corpus.tokenizer()?;
        Ok(labels
            .iter()
            .map(|(id, &y)| (tokenizer.tokens(&by_id[id].text, Profile::Classify), y))
            .unzip())
    }

    /// Cross-validate the configured model over the grid and fit the chosen
    /// hyperparameters on every labeled sentence.
    pub fn train(&self, labels: Option<&Path>) -> Result<TrainSummary> {
        let started = Instant::now();
        let sentences_path = self.require(SENTENCES)?;
        let labels_path = match labels {
            Some(p) => self.require_file(p, "agreement (gold labels)")?,
            None => self.require(LABELS)?,
        };
        let sentences = read_sentences(&sentences_path)?;
        let gold = read_labels(&labels_path)?;
        let (docs, ys) = self.labeled_docs(&sentences, &gold)?;
        let c = &self.config.classify;
        let cv = cross_validate(c.model_kind, &docs, &ys, &c.grid, c.folds, c.seed)?;
        let best = cv.best().clone();
        let mut classifier = Classifier::fit(c.model_kind, &docs, &ys, best.hyperparams, c.seed)?;
        classifier.threshold = c.threshold;

        let (cv_out, report_out, model_out) = (self.path(CV), self.path(CV_REPORT), self.path(MODEL));
        write_json(&cv_out, &cv)?;
        let mut text = format!("grid,lambda,learning_rate,epochs,fold,{}\n", EvalReport::CSV_HEADER);
        for (g, point) in cv.grid.iter().enumerate() {
            let hp = &point.hyperparams;
            let prefix = format!("{g},{},{},{}", fmt_f64(hp.lambda), fmt_f64(hp.learning_rate), hp.epochs);
            for (f, r) in point.fold_reports.iter().enumerate() {
                text.push_str(&format!("{prefix},{f},{}\n", r.to_csv_row()));
            }
            text.push_str(&format!("{prefix},mean,{}\n", point.mean.to_csv_row()));
        }
        crate::io::write_text(&report_out, &text)?;
        classifier.save(&model_out)?;
        self.record(
            "train",
            started,
            &[sentences_path, labels_path],
            &[cv_out, report_out, model_out],
            Some(c.seed),
        )?;
        Ok(TrainSummary {
            examples: ys.len(),
            positives: ys.iter().filter(|&&y| y).count(),
            chosen: best.hyperparams,
            cv_mean: best.mean,
        })
    }

    /// Score every sentence with the trained model.
    pub fn predict(&self) -> Result<PredictSummary> {
        let started = Instant::now();
        let (model_path, sentences_path) = (self.require(MODEL)?, self.require(SENTENCES)?);
        let mut classifier = Classifier::load(&model_path)?;
        classifier.threshold = self.config.classify.threshold;
        let tokenizer = self.config.corpus.tokenizer()?;
        let sentences = read_sentences(&sentences_path)?;
        let predictions: Vec<Prediction> = {
            use rayon::prelude::*;
            sentences
                .par_iter()
                .map(|s| classifier.predict(&tokenizer.tokenize(s, Profile::Classify)))
                .collect()
        };
        let out = self.path(PREDICTIONS);
        write_predictions(&out, &predictions)?;
        self.record("predict", started, &[model_path, sentences_path], &[out], None)?;
        Ok(PredictSummary {
            sentences: predictions.len(),
            predicted_positive: predictions.iter().filter(|p| p.label).count(),
        })
    }

    /// Metrics of a predictions file against gold labels. The predictions may
    /// come from this pipeline or from an external model.
    pub fn eval(&self, predictions: Option<&Path>, labels: Option<&Path>) -> Result<EvalOutput> {
        let started = Instant::now();
        let pred_path = match predictions {
            Some(p) => self.require_file(p, "predict (or an external predictions file)")?,
            None => self.require(PREDICTIONS)?,
        };
        let labels_path = match labels {
            Some(p) => self.require_file(p, "agreement (gold labels)")?,
            None => self.require(LABELS)?,
        };
        let threshold = self.config.classify.threshold;
        let preds = load_predictions(&pred_path, threshold)?;
        let gold = read_labels(&labels_path)?;
        let mut inputs = vec![pred_path, labels_path];

        let matched: Vec<&Prediction> = preds.iter().filter(|p| gold.contains_key(&p.sentence_id)).collect();
        let scores: Vec<f64> = matched.iter().map(|p| p.prob).collect();
        let predicted: Vec<bool> = matched.iter().map(|p| p.label).collect();
        let truth: Vec<bool> = matched.iter().map(|p| gold[&p.sentence_id]).collect();
        let report = evaluate(&scores, &predicted, &truth, threshold)?;

        let sentences = match self.path(SENTENCES) {
            p if p.is_file() => {
                let s = read_sentences(&p)?;
                inputs.push(p);
                s
            }
            _ => Vec::new(),
        };
        let misclass = export_misclassifications(&preds, &gold, &sentences);
        let (eval_out, roc_out, mis_out) = (self.path(EVAL), self.path(ROC), self.path(MISCLASSIFIED));
        misclass.write_csv(&mis_out)?;
        let mut outputs = vec![eval_out.clone(), mis_out];
        if report.auc.is_some() {
            write_roc_csv(&roc_out, &roc_curve(&scores, &truth)?)?;
            outputs.push(roc_out);
        }
        let output = EvalOutput {
            false_positives: misclass.count(crate::eval::RowKind::FalsePositive),
            false_negatives: misclass.count(crate::eval::RowKind::FalseNegative),
            labels_without_prediction: gold.len() - matched.len(),
            predictions_without_label: preds.len() - matched.len(),
            report,
        };
        write_json(&eval_out, &output)?;
        self.record("eval", started, &inputs, &outputs, None)?;
        Ok(output)
    }

    /// Fit LDA over the K grid, keep the most coherent model, and export its
    /// topics, assignments and labeling samples.
    pub fn topics(&self) -> Result<TopicsSummary> {
        let started = Instant::now();
        let t = &self.config.topics;
        let sentences_path = self.require(SENTENCES)?;
        let sentences = read_sentences(&sentences_path)?;
        let mut inputs = vec![sentences_path];
        let modeled: Vec<&Sentence> = match t.corpus {
            TopicCorpus::All => sentences.iter().collect(),
            TopicCorpus::Security => {
                let path = self.require(PREDICTIONS)?;
                let positive: BTreeSet<SentenceId> = load_predictions(&path, self.config.classify.threshold)?
                    .into_iter()
                    .filter(|p| p.label)
                    .map(|p| p.sentence_id)
                    .collect();
                inputs.push(path);
                sentences.iter().filter(|s| positive.contains(&s.id)).collect()
            }
        };
        let tokenizer = self.config.corpus.tokenizer()?;
        let tokenized: Vec<_> = modeled.iter().map(|s| tokenizer.tokenize(s, Profile::Topics)).collect();
        let (vocab, encoded) = build_vocab(&tokenized, self.config.corpus.min_count, self.config.corpus.max_count)?;
        let (kept, dropped): (Vec<_>, Vec<_>) = encoded.into_iter().partition(|d| !d.ids.is_empty());
        if kept.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let ids: Vec<SentenceId> = kept.iter().map(|d| d.sentence_id).collect();
        let docs: Vec<Vec<u32>> = kept.into_iter().map(|d| d.ids).collect();

        let selection = select_k(&docs, &vocab, &t.k_grid, &t.template(), t.seed, t.top_n, t.window)?;
        let model = &selection.model;
        let assignments = dominant_assignments(model, &ids)?;
        let samples = labeling_sample(&assignments, &sentences, model.k(), t.samples_per_topic, t.seed);

        let outputs = [TOPIC_VOCAB, TOPIC_MODEL, THETA, COHERENCE, ASSIGNMENTS, TOPIC_SAMPLES].map(|a| self.path(a));
        crate::io::write_text(&outputs[0], &vocab.to_tsv())?;
        write_model_summary(&outputs[1], model)?;
        write_matrix(&outputs[2], &model.theta)?;
        write_coherence_csv(&outputs[3], &selection.scores)?;
        write_assignments(&outputs[4], &assignments)?;
        write_labeling_csv(&outputs[5], &samples)?;
        self.record("topics", started, &inputs, &outputs, Some(t.seed))?;
        Ok(TopicsSummary {
            documents: docs.len(),
            dropped_empty: dropped.len(),
            vocab_size: vocab.len(),
            best_k: selection.best_k,
            coherence: model.coherence.unwrap_or(f64::NAN),
        })
    }

    /// Evolution, popularity/difficulty and discoverability tables.
    pub fn trends(&self) -> Result<TrendsSummary> {
        let started = Instant::now();
        let inputs = [ASSIGNMENTS, TOPIC_MODEL, SENTENCES, POSTS, PREDICTIONS]
            .into_iter()
            .map(|a| self.require(a))
            .collect::<Result<Vec<_>>>()?;
        let assignments = read_assignments(&inputs[0])?;
        let summary: TopicModelSummary = read_json(&inputs[1])?;
        let sentences = read_sentences(&inputs[2])?;
        let posts = read_posts(&inputs[3])?;
        let predictions = load_predictions(&inputs[4], self.config.classify.threshold)?;
        let positive: BTreeSet<SentenceId> =
            predictions.iter().filter(|p| p.label).map(|p| p.sentence_id).collect();

        let assigned: Vec<Sentence> = sentences.iter().filter(|s| assignments.contains_key(&s.id)).cloned().collect();
        let security: Vec<Sentence> = sentences.iter().filter(|s| positive.contains(&s.id)).cloned().collect();

        let mut outputs = Vec::new();
        let by_topic = absolute_impact(&assignments, &assigned, None, Granularity::Topic)?;
        write_trend_csv(&self.path(TREND_TOPICS), &by_topic)?;
        outputs.push(self.path(TREND_TOPICS));
        let categories = self.config.trends.category_map()?;
        if !categories.is_empty() {
            let by_category = absolute_impact(&assignments, &assigned, Some(&categories), Granularity::Category)?;
            write_trend_csv(&self.path(TREND_CATEGORIES), &by_category)?;
            outputs.push(self.path(TREND_CATEGORIES));
        }
        let growth = relative_growth(&monthly_counts(&security), &monthly_counts(&sentences))?;
        write_growth_csv(&self.path(GROWTH), &growth)?;
        outputs.push(self.path(GROWTH));
        let popularity = popularity_difficulty(&assignments, &sentences, &posts, summary.k)?;
        write_popularity_csv(&self.path(POPULARITY), &popularity)?;
        outputs.push(self.path(POPULARITY));
        let tags = self.config.trends.security_tags.clone();
        let fraction = discoverability(&security, &tags)?;
        write_json(
            &self.path(DISCOVERABILITY),
            &DiscoverabilityOutput {
                security_sentences: security.len(),
                security_tags: tags,
                fraction,
            },
        )?;
        outputs.push(self.path(DISCOVERABILITY));
        self.record("trends", started, &inputs, &outputs, None)?;
        Ok(TrendsSummary {
            assigned_sentences: assigned.len(),
            buckets: by_topic.len(),
            months: growth.points.len(),
            months_omitted: growth.omitted.len(),
            discoverability: fraction,
        })
    }

    /// Summarize whatever artifacts exist, without recomputing anything.
    pub fn report(&self) -> Result<Report> {
        let started = Instant::now();
        let (report, inputs) = report::build(self)?;
        let (json_out, md_out) = (self.path(REPORT_JSON), self.path(REPORT_MD));
        write_json(&json_out, &report)?;
        crate::io::write_text(&md_out, &report.to_markdown())?;
        self.record("report", started, &inputs, &[json_out, md_out], None)?;
        Ok(report)
    }
}
