use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its invariant. `name` is the offending key.
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("distance {distance} m is inside the reference distance {reference} m")]
    InsideReferenceDistance { distance: f64, reference: f64 },

    #[error("{what} must be strictly positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("decision is infeasible: {0}")]
    InfeasibleDecision(String),

    #[error("dimension mismatch: expected {expected} users, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty trace")]
    EmptyTrace,

    #[error("series of length {len} is too short")]
    SeriesTooShort { len: usize },

    #[error("brute-force oracle supports at most 3 users, got {0}")]
    TooManyUsers(usize),

    #[error("iteration cap of {cap} reached without convergence")]
    IterationCap { cap: usize },

    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
