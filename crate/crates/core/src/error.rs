use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid truncation: N = {0}, need N >= 2")]
    InvalidTruncation(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator is not self-adjoint (max asymmetry {0:e})")]
    NotSelfAdjoint(f64),

    #[error("displacement diverges at oscillator resonance (detuning = 0)")]
    ResonanceSingularity,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("propagator unitarity defect {defect:e} exceeds tolerance {tolerance:e}; reduce the time step")]
    PropagationAccuracy { defect: f64, tolerance: f64 },

    #[error("basis too small: truncation leakage {leakage:e} for N = {n}")]
    BasisTooSmall { leakage: f64, n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("undefined for the zero vector")]
    ZeroVector,

    #[error("eigenvalue iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) | Error::InvalidTruncation(_) => 2,
            Error::PropagationAccuracy { .. } | Error::BasisTooSmall { .. } | Error::NoConvergence(_) | Error::NonFinite => 3,
            _ => 1,
        }
    }
}
