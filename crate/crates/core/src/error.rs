use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("invalid alphabet `{name}`: {reason}")]
    InvalidAlphabet { name: String, reason: String },

    #[error("shape mismatch for `{what}`: expected {expected}, found {found}")]
    Shape {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("{context} sums to {sum} instead of 1")]
    Normalization { context: String, sum: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown name `{0}`")]
    Name(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),
}
