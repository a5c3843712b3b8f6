use std::path::PathBuf;

use thiserror::Error;

use crate::rootfind::RootFindReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation point lies on a zero of the polynomial (index {index})")]
    PoleHit { index: usize },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("polynomial is constant")]
    ConstantPoly,

    #[error("polynomial has no nonzero coefficient")]
    ZeroPoly,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("zeros {0} and {1} coincide to within 1e-12")]
    DuplicateZeros(usize, usize),

    #[error("simultaneous iteration did not converge after {} sweeps", .0.iterations)]
    AberthNotConverged(Box<RootFindReport>),

    #[error("iteration did not converge after {iterations} steps")]
    NotConverged { iterations: usize },

    #[error("Newton iterate left the trust region of radius {radius}")]
    LeftTrustRegion { radius: f64 },

    #[error("contour passes within {distance:e} of a zero or critical point")]
    ContourTooClose { distance: f64 },

    #[error("winding number {value} is not close to an integer")]
    NonIntegerWinding { value: f64 },

    #[error("QR iteration failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("eigenvalue trace check failed: |sum - trace| = {residual:e} > {bound:e}")]
    TraceMismatch { residual: f64, bound: f64 },

    #[error("matrix must be square and non-empty (got {rows}x{cols})")]
    BadMatrix { rows: usize, cols: usize },

    #[error("invalid radial CDF table: {0}")]
    BadCdfTable(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("Cauchy-Stieltjes transform vanishes at the zero")]
    ZeroTransform,

    #[error("density vanishes at the zero")]
    ZeroDensity,

    #[error("sample is empty or too small")]
    EmptySample,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
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
