use thiserror::Error;

/// Errors raised by the solver, its diagnostics and the benchmark harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DgError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("time {t} outside [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("root finder did not converge for degree {degree}")]
    RootFinding { degree: usize },

    #[error("singular matrix: zero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("forcing evaluation failed at t = {t}")]
    Forcing { t: f64 },

    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),

    #[error("N values must double between rows: {0:?}")]
    NonDoublingSequence(Vec<usize>),

    #[error("empty sampling window [{0}, {1}]")]
    EmptyWindow(f64, f64),

    #[error("contour accuracy check failed: relative change {change:e} exceeds {tolerance:e}")]
    ContourAccuracy { change: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, DgError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DgError::InvalidArgument(msg.into()))
}
