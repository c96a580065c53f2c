use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The leading coefficient of the dispersion quadratic vanished. When the
    /// linear coefficient does not, the single remaining root is attached.
    #[error("degenerate dispersion quadratic (time-time coefficient is zero), linear root {root:?}")]
    DegenerateQuadratic { root: Option<Complex64> },

    #[error("insufficient resolution: {points} points per axis, need at least {required}")]
    InsufficientResolution { points: usize, required: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// |psi| fell below the relative threshold at a sample where the
    /// logarithm or a division by psi is needed.
    #[error("field too close to zero at index {index}: |psi| = {magnitude:e}, threshold {threshold:e}")]
    NearZeroField {
        index: usize,
        magnitude: f64,
        threshold: f64,
    },

    #[error("stability violation: {0}")]
    Stability(String),

    #[error("numerical failure at step {step}: {detail}")]
    Numerical { step: usize, detail: String },

    #[error("integration diverged at step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },

    #[error("serialization: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
