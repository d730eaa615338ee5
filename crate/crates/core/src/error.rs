use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped so a front end can map them onto exit codes with
/// [`Error::class`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("i/o error: {0}")]
    RawIo(#[from] io::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("corpus has no trainable vocabulary")]
    EmptyVocabulary,
    #[error("no trainable instances: every document lacks candidate associations")]
    NoTrainingInstances,
    #[error("query has no in-vocabulary terms")]
    UnanswerableQuery,
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
    #[error("word id {id} out of range for vocabulary of {size}")]
    InvalidWordId { id: usize, size: usize },
    #[error("rankings cover different candidate sets")]
    CandidateSetMismatch,
    #[error("run and qrels share no queries")]
    DisjointQueries,
    #[error("paired vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("{0} has zero variance")]
    ZeroVariance(&'static str),
    #[error("embedding file has dimension {found}, model expects {expected}")]
    EmbeddingDimension { expected: usize, found: usize },
    #[error("model file: bad magic bytes")]
    BadMagic,
    #[error("model file: unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("model file: truncated")]
    Truncated,
    #[error("model file: checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },
    #[error("model file: shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

/// Coarse failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Format,
    Numeric,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::RawIo(_) => ErrorClass::Io,
            Error::Parse { .. }
            | Error::BadMagic
            | Error::UnsupportedVersion(_)
            | Error::Truncated
            | Error::Checksum { .. }
            | Error::ShapeMismatch(_)
            | Error::EmbeddingDimension { .. } => ErrorClass::Format,
            Error::NonFinite(_) | Error::ZeroVariance(_) => ErrorClass::Numeric,
            _ => ErrorClass::Usage,
        }
    }
}
