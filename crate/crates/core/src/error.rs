use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read corpus root {path}: {source}")]
    CorpusRoot {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("extension map line {line}: {reason}")]
    ExtensionMap { line: usize, reason: String },

    #[error("no samples to train on")]
    NoSamples,

    #[error("training sample {origin} has no language label")]
    UnlabeledSample { origin: String },

    #[error("declared language {0} has no training samples")]
    EmptyLanguage(String),

    #[error("invalid feature depth for {feature}: {depth} (must be >= 1)")]
    InvalidDepth { feature: String, depth: usize },

    #[error("unsupported model format version {found} (expected {expected})")]
    ModelVersion { found: u64, expected: u64 },

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("duplicate language in model: {0}")]
    DuplicateLanguage(String),

    #[error("model has no languages")]
    EmptyModel,

    #[error("language {language} (from {origin}) is not known to the model")]
    UnknownLabel { language: String, origin: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
