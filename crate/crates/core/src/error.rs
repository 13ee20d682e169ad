//! Error type shared by the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("radicand must be nonzero")]
    ZeroRadicand,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} is not a {1}-core")]
    NotACore(String, usize),
    #[error("{0} is not a bar {1}-core")]
    NotABarCore(String, usize),
    #[error("{0} is not self-conjugate")]
    NotSelfConjugate(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent split data: {0}")]
    InconsistentSplit(String),
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(usize, usize),
    #[error("sign precondition violated: {0}")]
    SignPrecondition(String),
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
