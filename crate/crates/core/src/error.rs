use std::path::PathBuf;

use thiserror::Error;

use crate::grammar::GrammarError;
use crate::lexicon::LexiconError;
use crate::model::TagsetError;
use crate::text::TagError;

/// Failure to read one of the document or binary formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("XML syntax error: {0}")]
    Xml(String),
    #[error("{line}:{column}: {message}")]
    Malformed {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("bad magic number, expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("unexpected end of data")]
    Truncated,
    #[error("invalid binary data: {0}")]
    Binary(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Tagset(#[from] TagsetError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Tag(#[from] TagError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid project configuration: {0}")]
    Config(String),
    #[error("stage `{stage}` needs {artifact}, which has not been produced")]
    MissingPrerequisite { stage: String, artifact: String },
    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
