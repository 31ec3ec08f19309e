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

    #[error("{0} is not valid UTF-8")]
    Decode(String),

    #[error("end-of-book marker (line {end_line}) precedes start marker (line {start_line})")]
    MarkerOrder { start_line: usize, end_line: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("intensity {value} out of range [0, 1] at line {line}")]
    Range { line: usize, value: f64 },

    #[error("duplicate (lemma, emotion) rows: {}", format_duplicates(.0))]
    Duplicate(Vec<(String, String)>),

    #[error("unknown emotion `{name}` at line {line}")]
    UnknownEmotion { line: usize, name: String },

    #[error("lemma `{0}` is not in the lexicon")]
    MissingLemma(String),

    #[error("document `{0}` has no word tokens")]
    EmptyDocument(String),

    #[error("cannot split {words} word tokens into {chunks} chunks")]
    Chunking { words: usize, chunks: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("vector dimensions differ ({0} vs {1})")]
    Dim(usize, usize),

    #[error("cosine undefined for an all-zero vector")]
    ZeroVector,

    #[error("no lemma reaches min_count = {0}")]
    EmptyVocab(usize),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

fn format_duplicates(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(l, e)| format!("{l}/{e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
