use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(f64),
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("word `{0}` has an empty context")]
    EmptyContext(String),
    #[error("query vector is all zero")]
    ZeroVector,
    #[error("query has no in-vocabulary tokens")]
    NoQueryTokens,
    #[error("sentence index is empty")]
    EmptyIndex,
    #[error("no training messages with label {0}")]
    EmptyClass(u8),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("corpus layout: {0}")]
    CorpusLayout(String),
    #[error("invalid data: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the filesystem rather than by the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
