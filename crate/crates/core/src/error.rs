use thiserror::Error;

use crate::field::FpVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u32),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("matrix is singular over F_{0}")]
    SingularMatrix(u32),

    #[error("requested {requested} Vandermonde points but only {available} exist")]
    TooManyPoints { requested: usize, available: usize },

    #[error("missing sample at point {0}")]
    MissingSamples(FpVector),

    #[error("median requires an odd number of values (got {0})")]
    EvenLength(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
