use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("structural invariant violated: {0}")]
    Structure(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("path leaves the materialized truncation: {0}")]
    Truncation(String),
    #[error("function undefined at its base vertex")]
    UndefinedAtBase,
    #[error("vertex lies in the excluded domain: {0}")]
    ExcludedDomain(String),
    #[error("no similarity: {0}")]
    NoSimilarity(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
