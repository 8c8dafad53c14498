use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("fractional order must be nonnegative, got {0}")]
    NegativeOrder(f64),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate design: the normal matrix is singular")]
    DegenerateDesign,

    #[error("value at position {index} must be positive, got {value}")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("actual value at position {index} is zero")]
    ZeroActual { index: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("numerical breakdown: non-finite value produced at order {alpha}")]
    NonFinite { alpha: f64 },

    #[error("no feasible order on the search grid ({points} points tried)")]
    NoFeasibleOrder { points: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
