//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not invertible as unit: constant term is zero")]
    NotInvertible,

    #[error("no compositional inverse: {0}")]
    NoInverse(&'static str),

    #[error("nonzero constant term: {0}")]
    NonzeroConstant(&'static str),

    #[error("order out of range: requested {requested}, available {available}")]
    OrderOutOfRange { requested: usize, available: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown preset: {0}")]
    UnknownPreset(String),

    #[error("singular evaluation point: {0}")]
    SingularPoint(String),

    #[error("no root located: {0}")]
    NoRoot(String),

    #[error("inconsistent moment sequence: {0}")]
    Inconsistent(String),

    #[error("increase cutoff: captured mass {captured} below required {required}")]
    IncreaseCutoff { captured: f64, required: f64 },

    #[error("velocity undefined at frozen point (x={x}, y={y})")]
    Frozen { x: f64, y: f64 },

    #[error("precision failure: {0}")]
    Precision(String),
}

impl Error {
    /// True for failures caused by malformed input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::Parse(_)
                | Error::UnknownPreset(_)
                | Error::OrderOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
