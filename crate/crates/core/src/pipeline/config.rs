//! The pipeline configuration file (TOML).
//!
//! Every section and key is optional; omitted values take the defaults of
//! [`PipelineConfig::default`]. Relative paths are resolved against the
//! directory holding the configuration file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{default_grid, HyperParams, ModelKind, DEFAULT_FOLDS, DEFAULT_SEED, DEFAULT_THRESHOLD};
use crate::corpus::{Tokenizer, DEFAULT_MIN_TOKEN_LEN};
use crate::error::{Error, Result};
use crate::tagset::TagSetConfig;
use crate::topics::{
    AlphaPolicy, LdaTemplate, DEFAULT_BETA, DEFAULT_BURN_IN, DEFAULT_ITERATIONS, DEFAULT_TOP_N, DEFAULT_WINDOW,
};
use crate::trends::default_security_tags;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub ingest: IngestSection,
    pub tags: TagsSection,
    pub corpus: CorpusSection,
    pub sample: SampleSection,
    pub classify: ClassifySection,
    pub topics: TopicsSection,
    pub trends: TrendsSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestSection {
    /// The `Posts.xml` dump to read.
    pub dump_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TagsSection {
    pub seed_tags: Vec<String>,
    pub seed_substring: Option<String>,
    pub mu: f64,
    pub nu: f64,
}

impl Default for TagsSection {
    fn default() -> Self {
        let d = TagSetConfig::default();
        Self {
            seed_tags: d.seed_tags,
            seed_substring: d.seed_substring,
            mu: d.mu_threshold,
            nu: d.nu_threshold,
        }
    }
}

impl TagsSection {
    pub fn tagset_config(&self) -> TagSetConfig {
        TagSetConfig {
            seed_tags: self.seed_tags.clone(),
            seed_substring: self.seed_substring.clone(),
            mu_threshold: self.mu,
            nu_threshold: self.nu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub min_token_len: usize,
    /// Replaces the bundled English stopword list when set.
    pub stopword_file: Option<PathBuf>,
    /// Inclusive corpus-frequency bounds of the topic-modeling vocabulary.
    pub min_count: u64,
    pub max_count: u64,
}

impl Default for CorpusSection {
    fn default() -> Self {
        Self {
            min_token_len: DEFAULT_MIN_TOKEN_LEN,
            stopword_file: None,
            min_count: 20,
            max_count: 2000,
        }
    }
}

impl CorpusSection {
    pub fn tokenizer(&self) -> Result<Tokenizer> {
        match &self.stopword_file {
            Some(path) => Tokenizer::from_stopword_file(path, self.min_token_len),
            None => Ok(Tokenizer::english(self.min_token_len)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSection {
    pub size: usize,
    pub seed: u64,
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            size: 384,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifySection {
    pub model_kind: ModelKind,
    pub folds: usize,
    pub seed: u64,
    pub threshold: f64,
    pub grid: Vec<HyperParams>,
}

impl Default for ClassifySection {
    fn default() -> Self {
        Self {
            model_kind: ModelKind::LinearSvm,
            folds: DEFAULT_FOLDS,
            seed: DEFAULT_SEED,
            threshold: DEFAULT_THRESHOLD,
            grid: default_grid(),
        }
    }
}

/// Which sentences the topic model is fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicCorpus {
    /// Sentences predicted as security-related.
    Security,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicsSection {
    pub corpus: TopicCorpus,
    pub k_grid: Vec<usize>,
    pub alpha_policy: AlphaPolicy,
    pub beta: f64,
    pub iterations: u32,
    pub burn_in: u32,
    pub seed: u64,
    pub top_n: usize,
    pub window: usize,
    pub samples_per_topic: usize,
}

impl Default for TopicsSection {
    fn default() -> Self {
        Self {
            corpus: TopicCorpus::Security,
            k_grid: vec![1, 4, 8, 9, 10, 11, 12, 16, 20, 24, 28, 32, 36, 40],
            alpha_policy: AlphaPolicy::FiftyOverK,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            seed: DEFAULT_SEED,
            top_n: DEFAULT_TOP_N,
            window: DEFAULT_WINDOW,
            samples_per_topic: crate::topics::LABELING_SAMPLE_SIZE,
        }
    }
}

impl TopicsSection {
    pub fn template(&self) -> LdaTemplate {
        LdaTemplate {
            alpha_policy: self.alpha_policy,
            beta: self.beta,
            iterations: self.iterations,
            burn_in: self.burn_in,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketWidth {
    HalfYear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrendsSection {
    pub security_tags: Vec<String>,
    pub bucket: BucketWidth,
    /// Topic id (as a string key) to category name.
    pub categories: BTreeMap<String, String>,
}

impl Default for TrendsSection {
    fn default() -> Self {
        Self {
            security_tags: default_security_tags(),
            bucket: BucketWidth::HalfYear,
            categories: BTreeMap::new(),
        }
    }
}

impl TrendsSection {
    pub fn category_map(&self) -> Result<BTreeMap<usize, String>> {
        self.categories
            .iter()
            .map(|(k, v)| {
                let topic = k
                    .parse()
                    .map_err(|_| Error::Config(format!("trends.categories key `{k}` is not a topic id")))?;
                Ok((topic, v.clone()))
            })
            .collect()
    }
}

impl PipelineConfig {
    /// Parse a configuration file and resolve its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.ingest.dump_path.as_mut() {
            fix(p);
        }
        if let Some(p) = self.corpus.stopword_file.as_mut() {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tags.tagset_config().validate()?;
        if self.corpus.min_count > self.corpus.max_count {
            return Err(Error::Config("corpus.min_count exceeds corpus.max_count".into()));
        }
        if self.classify.grid.is_empty() {
            return Err(Error::Config("classify.grid is empty".into()));
        }
        if !(0.0..=1.0).contains(&self.classify.threshold) {
            return Err(Error::Config("classify.threshold must lie in [0, 1]".into()));
        }
        if self.topics.k_grid.is_empty() || self.topics.k_grid.contains(&0) {
            return Err(Error::Config("topics.k_grid must be non-empty and positive".into()));
        }
        self.topics.template().config(1, 0).validate()?;
        if self.trends.security_tags.is_empty() {
            return Err(Error::Config("trends.security_tags is empty".into()));
        }
        self.trends.category_map()?;
        Ok(())
    }

    /// SHA-256 over the canonical JSON form of the effective configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("configuration serializes");
        hex::encode(Sha256::digest(bytes))
    }
}
