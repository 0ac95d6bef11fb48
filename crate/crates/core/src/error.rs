use thiserror::Error;

/// Errors raised by the bound computation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("capped simplex with capacity {capacity} over {len} coordinates is empty")]
    InfeasibleCap { capacity: f64, len: usize },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("arrow consistency violated at index {index} (residual {residual:e})")]
    ArrowHypothesis { index: usize, residual: f64 },

    #[error("instance too large for exhaustive enumeration: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
