use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid quadrature scheme: {0}")]
    InvalidScheme(String),

    /// A boundary integrand produced NaN or an infinity.
    #[error("non-finite integrand value at quadrature node {index} ({node:?})")]
    QuadratureDomain { index: usize, node: Vec<[f64; 2]> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("self-map has not been validated on a boundary node set")]
    NotValidated,

    #[error("not a self-map of the ball: max |phi| = {max_modulus} exceeds 1 + {tol}")]
    NotSelfMap { max_modulus: f64, tol: f64 },

    #[error("integrand is negative ({value}) at atom {index}")]
    NegativeIntegrand { index: usize, value: f64 },

    #[error("empty input: {0}")]
    Empty(String),

    /// Estimators that need a non-constant inner function only run on the disk.
    #[error("{feature} is only available for n = 1 (got n = {n})")]
    Gated { feature: &'static str, n: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degree budget d = {degree} too small: {tail_fraction:.3e} of the H2 mass lies above it")]
    DegreeBudget { degree: u32, tail_fraction: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("missing prerequisite report: {0}")]
    MissingPrerequisite(String),

    #[error("regime {regime} is not covered; nearest available result: {nearest}")]
    UncoveredRegime { regime: String, nearest: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
