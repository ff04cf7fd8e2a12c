use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("seed tags matched no questions")]
    NoSeedMatches,

    #[error("all terms filtered")]
    EmptyVocabulary,

    #[error("degenerate training set: {0}")]
    DegenerateTrainingSet(String),

    #[error("AUC undefined: {0}")]
    AucUndefined(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("duplicate id {0}")]
    DuplicateId(String),

    #[error("id sets differ; symmetric difference: {}", .0.join(", "))]
    IdMismatch(Vec<String>),

    #[error("insufficient population in stratum `{stratum}`: requested {requested}, available {available}")]
    InsufficientPopulation {
        stratum: String,
        requested: usize,
        available: usize,
    },

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("missing input artifact {path} (produced by stage `{stage}`)")]
    MissingArtifact { path: PathBuf, stage: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Format { .. } => "format",
            Error::InvalidInput(_) => "invalid_input",
            Error::NoSeedMatches => "no_seed_matches",
            Error::EmptyVocabulary => "empty_vocabulary",
            Error::DegenerateTrainingSet(_) => "degenerate_training_set",
            Error::AucUndefined(_) => "auc_undefined",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::DuplicateId(_) => "duplicate_id",
            Error::IdMismatch(_) => "id_mismatch",
            Error::InsufficientPopulation { .. } => "insufficient_population",
            Error::OutOfRange { .. } => "out_of_range",
            Error::MissingArtifact { .. } => "missing_artifact",
            Error::Config(_) => "config",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
