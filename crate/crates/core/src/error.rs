use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("ring dimension must be between 1 and {max}, got {got}")]
    BadDimension { got: usize, max: usize },

    #[error("exponent vector has length {got}, expected {expected}")]
    ArityMismatch { got: usize, expected: usize },

    #[error("ideal is not m-primary: no pure power of variable {var}")]
    NotMPrimary { var: usize },

    #[error("quotient has no certified finite length up to truncation degree {cap}")]
    NotFiniteLength { cap: usize },

    #[error("truncated length did not stabilise up to degree {cap}")]
    Unstable { cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("square-zero check failed: d_{0} composed with d_{1} is nonzero")]
    SignError(usize, usize),

    #[error("window underflow: no table value at ({0}, {1})")]
    WindowUnderflow(i64, i64),

    #[error("polynomial fit unstable: {0}")]
    FitUnstable(String),

    #[error("cross-check failed for {what}: {left} vs {right}")]
    CrossCheckFailed {
        what: String,
        left: String,
        right: String,
    },

    #[error("limit length did not stabilise by n = {0}")]
    NotStabilized(usize),

    #[error("homology tail not closed within window: {0}")]
    TailNotClosed(String),

    #[error("window inconclusive: {0}")]
    WindowInconclusive(String),

    #[error("cache entry {key} is corrupt: {reason}")]
    CacheCorrupt { key: String, reason: String },

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
