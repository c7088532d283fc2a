use thiserror::Error;

/// Errors surfaced by solvers, instance builders and the batch harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("starting point is not feasible")]
    InfeasibleStart,
    #[error("non-finite value at iteration {0}")]
    NonFinite(usize),
    #[error("negative primal gap {h:e} at iteration {t}")]
    NegativeGap { t: usize, h: f64 },
    #[error("invariant violated at iteration {t}: {what}")]
    Invariant { t: usize, what: String },
    #[error("step rule: {0}")]
    Step(#[from] StepError),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Failures of a single step-length evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("degenerate direction (x equals the vertex)")]
    DegenerateDirection,
    #[error("constant step {0} outside (0, 1]")]
    ConstantOutOfRange(f64),
    #[error("line search needs a finite objective along the segment")]
    LineSearchFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
