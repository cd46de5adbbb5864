//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The kernel moment integral does not converge for the given space
    /// parameters; the operator is outside the bounded regime.
    #[error("divergent moment: {0}")]
    DivergentMoment(String),

    /// A kernel has mass at or below the origin.
    #[error("kernel support must be strictly positive: {0}")]
    NonPositiveSupport(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("truncation parameter must lie in (0,1), got {0}")]
    InvalidDelta(f64),

    #[error("atomic kernels have no log-line representative; use the symbol module")]
    AtomicKernelUnsupported,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),

    /// lambda lies on (or too close to) the spectral curve; no bounded
    /// resolvent exists there.
    #[error("lambda {lambda} is within {distance:.3e} of the spectral curve (margin {margin:.3e})")]
    LambdaOnSpectrum {
        lambda: Complex64,
        distance: f64,
        margin: f64,
    },

    #[error("lambda must be nonzero")]
    LambdaZero,

    #[error("point {0} is not in the open upper half-plane")]
    PointNotInUpperHalfPlane(Complex64),

    #[error("function evaluation failed at {0}")]
    EvaluationFailure(Complex64),

    #[error("weight |x|^a is not integrable near the origin for a = {0}")]
    NonintegrableWeight(f64),

    #[error("truncated domain too small: {0}")]
    TruncationTooSmall(String),

    /// Cesaro parameters outside p*Re(nu) > a+1.
    #[error("unbounded regime: p*Re(nu) = {0} must exceed a+1 = {1}")]
    UnboundedRegime(f64, f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
