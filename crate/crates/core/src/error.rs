use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample count {0} must be a power of two and at least 4")]
    BadSampleCount(usize),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("bandwidth {bandwidth} aliases on {samples} samples (need 2M+1 <= N)")]
    Aliasing { bandwidth: usize, samples: usize },

    #[error("{samples} samples cannot carry bandwidth {bandwidth} (need N >= 2M+2)")]
    TooFewSamples { bandwidth: usize, samples: usize },

    #[error("samples are not unimodular: max | |f| - 1 | = {deviation:.3e} exceeds {tol:.3e}")]
    NotUnimodular { deviation: f64, tol: f64 },

    #[error(
        "insufficient resolution: phase step {step:.4} at sample {index} reaches pi; use more samples"
    )]
    InsufficientResolution { index: usize, step: f64 },

    #[error("sample {0} vanishes; the argument is undefined")]
    ZeroSample(usize),

    #[error("map has degree {0}; shift the coefficients with normalize_degree first")]
    NonzeroDegree(i64),

    #[error(
        "smoothing collapsed the modulus: min |h| = {min:.3e} below floor {floor}; use a smaller epsilon or check that the input is in VMO"
    )]
    ModulusCollapsed { min: f64, floor: f64 },

    #[error("not in VMO at grid resolution: oscillation {osc:.3e} at half-width {scale:.3e} exceeds {limit:.3e}")]
    NotVmo { osc: f64, scale: f64, limit: f64 },

    #[error("argument reduction to {target} failed: residual phase {residual:.3e} at cutoff {cutoff}; input too rough for this grid")]
    ReductionFailed {
        target: f64,
        residual: f64,
        cutoff: usize,
    },

    #[error("zero {0} is too close to the unit circle for boundary sampling")]
    ZeroNearBoundary(String),

    #[error("dilation by {nu} of bandwidth {bandwidth} exceeds capacity {capacity}")]
    Capacity {
        nu: u64,
        bandwidth: usize,
        capacity: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
