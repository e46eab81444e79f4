use crate::grid::LevelIndex;
use thiserror::Error;

/// Errors raised by the solver library and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index:?} out of range for extents {extents:?}")]
    IndexOutOfRange { index: Vec<usize>, extents: Vec<usize> },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },

    #[error("grid line of length {len} is too short for the five-point stencil")]
    LineTooShort { len: usize },

    #[error("combination set is missing grid {0}")]
    MissingGrid(LevelIndex),

    #[error("inconsistent domain: {0}")]
    InconsistentDomain(String),

    #[error("non-positive quantity: {0}")]
    NonPositive(String),

    #[error("all wave speeds are zero; the state is stationary")]
    Stationary,

    #[error("integrator failure in stage {stage}{}{}", level.as_ref().map(|l| format!(" on grid {l}")).unwrap_or_default(), step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    IntegratorFailure {
        stage: usize,
        level: Option<LevelIndex>,
        step: Option<usize>,
    },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
