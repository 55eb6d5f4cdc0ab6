use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse {what}: {msg}")]
    Parse { what: &'static str, msg: String },

    #[error("both operands of {0} are empty")]
    EmptyOperands(&'static str),

    #[error("increasing pattern needs u >= 1")]
    ZeroLength,

    #[error("{0} contains the pattern 132")]
    NotAvoider(String),

    #[error("pattern {0} does not end in its largest entry")]
    NotEndingInMax(String),

    #[error("colored tree does not carry the expected pattern: expected {expected}, found {found}")]
    PatternMismatch { expected: String, found: String },

    #[error("invalid colored tree: {0}")]
    InvalidColoring(String),

    #[error("structural corruption: {0}")]
    Structural(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("invalid series operation: {0}")]
    Series(String),

    #[error("patterns {0} and {1} have different signatures")]
    NotEquivalent(String, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
