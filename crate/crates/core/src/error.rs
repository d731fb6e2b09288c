use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CoNLL-U parse error at line {line}: {message}")]
    Conllu { line: usize, message: String },

    #[error("label table error at line {line}: {message}")]
    LabelTable { line: usize, message: String },

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("dense vector file error at line {line}: {message}")]
    Vectors { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no dense vector for document `{0}`")]
    MissingVector(String),

    #[error("invalid feature specification: {0}")]
    Features(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("model format error at line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("predictions file error: {0}")]
    Predictions(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
