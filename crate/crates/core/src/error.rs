use thiserror::Error;

/// Errors shared across the optimizer, baseline, and harness modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: bounds must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("search space needs at least one variable")]
    EmptySearchSpace,

    #[error("dimension mismatch: objective expects {expected} variables, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An objective returned NaN or infinity. Runs abort rather than clamp;
    /// the offending point is carried for diagnostics.
    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFiniteObjective { value: f64, point: Vec<f64> },

    #[error("non-finite loss {value} at step {step}")]
    NonFiniteLoss { value: f64, step: usize },

    #[error("non-finite gradient component {value} (index {index}) at step {step}")]
    NonFiniteGradient {
        value: f64,
        index: usize,
        step: usize,
    },

    #[error("malformed trace: {0}")]
    MalformedTrace(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
