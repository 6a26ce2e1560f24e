use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("frame does not span the operator space: numerical rank {rank}, need {required}")]
    SingularFrame { rank: usize, required: usize },

    #[error("dual pair fails reconstruction (max residual {residual:.3e})")]
    InvalidDualPair { residual: f64 },

    #[error("bases are not faithful: smallest overlap |<a|b>| = {min_overlap:.3e}")]
    NonFaithfulBases { min_overlap: f64 },

    #[error("spanning sets do not resolve the target (residual {residual:.3e})")]
    SpanningViolation { residual: f64 },

    #[error("state map is not injective: rank {rank}, need {required}")]
    InjectivityViolation { rank: usize, required: usize },

    #[error("matrix is not idempotent (max |D^2 - D| = {residual:.3e})")]
    NotIdempotent { residual: f64 },

    #[error("splittings belong to different idempotents (max residual {residual:.3e})")]
    SplittingMismatch { residual: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("no representation registered for system {0}")]
    MissingSystem(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
