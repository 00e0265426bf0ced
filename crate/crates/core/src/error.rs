use thiserror::Error;

/// Errors raised by the geometric and dynamical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is too small (need at least {1})")]
    DimensionTooSmall(usize, usize),

    #[error("state is not normalized: <psi|psi> = {0}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("negative variance {0:e} beyond the numerical clamp")]
    NegativeVariance(f64),

    #[error("horizontal geodesic preconditions violated: {0}")]
    HorizontalPrecondition(String),

    #[error("degenerate geodesic arc: the two states lie on the same ray")]
    DegenerateArc,

    #[error("arc parameter {s} outside [0, {theta}]")]
    ArcParameterOutOfRange { s: f64, theta: f64 },

    #[error("total phase undefined: <psi(0)|psi(T)> vanishes")]
    UndefinedTotalPhase,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("search space size {n} exceeds the cap {cap}")]
    ResourceLimit { n: usize, cap: usize },

    #[error("invalid probability path: p[{index}] = {value:e} at theta = {theta}")]
    InvalidPath { index: usize, value: f64, theta: f64 },

    #[error("analytic amplitude derivatives are not available for this path")]
    MissingDerivative,

    #[error("Fisher information must be positive, got {value:e} at sample {index}")]
    NonPositiveInformation { index: usize, value: f64 },

    #[error("reparametrization factor must be positive, got {value:e} at sample {index}")]
    InvalidReparametrization { index: usize, value: f64 },

    #[error("metric is singular at {x:?} (det = {det:e})")]
    SingularMetric { x: Vec<f64>, det: f64 },

    #[error("metric is not symmetric at {x:?} (defect {defect:e})")]
    AsymmetricMetric { x: Vec<f64>, defect: f64 },

    #[error("coordinate outside the model domain: {0}")]
    Domain(String),

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dimension(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
