use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are split between engine misuse (shape/cache errors), data
/// validation (CSV and checkpoint ingestion), and I/O. `is_validation`
/// drives the CLI exit-code convention: validation errors exit 1,
/// runtime failures exit 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: expected {expected}, got {got}")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("stale cache: {0}")]
    StaleCache(&'static str),

    #[error("empty batch")]
    EmptyBatch,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("empty dataset")]
    EmptyDataset,

    #[error("empty evaluation")]
    EmptyEvaluation,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("line {line}: expected {expected} feature columns, found {found}")]
    MissingFeature {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: duplicate key {key}")]
    DuplicateKey { line: u64, key: String },

    #[error("line {line}, column {column}: not a finite number")]
    NonFiniteValue { line: u64, column: String },

    #[error("bad header: {0}")]
    BadHeader(String),

    #[error("line {line}: bad label {value:?} (expected 0 or 1)")]
    BadLabel { line: u64, value: String },

    #[error("line {line}: {message}")]
    BadRecord { line: u64, message: String },

    #[error("no examples for lead {lead}")]
    NoExamples { lead: u8 },

    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Wrap an I/O error with the path it occurred on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by invalid input (bad files, bad config,
    /// impossible requests) as opposed to runtime failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Csv(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
