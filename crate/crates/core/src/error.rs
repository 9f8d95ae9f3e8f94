use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {0} exceeds the hard cap of {cap}", cap = crate::matrix::MAX_DIM)]
    DimensionCap(usize),

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {bound:e}")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below {bound:e}")]
    NotPositive { eigenvalue: f64, bound: f64 },

    #[error("ill-conditioned: smallest eigenvalue {eigenvalue:e} below floor {floor:e}")]
    IllConditioned { eigenvalue: f64, floor: f64 },

    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),

    #[error("algebra shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("module space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("element is not central")]
    NonCentral,

    #[error("unsupported operator form: {0}")]
    UnsupportedForm(String),

    #[error("structural and probe self-adjointness checks disagree (structural {structural}, probes {probes})")]
    SelfAdjointDisagreement { structural: bool, probes: bool },

    #[error("conic {alpha} u^2 + {beta} v^2 = {gamma} has no real points")]
    InfeasibleConic { alpha: f64, beta: f64, gamma: f64 },

    #[error("sampling failed after {0} retries")]
    SamplingExhausted(usize),

    #[error("generated instance failed validation: {0}")]
    Validation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
