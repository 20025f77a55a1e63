use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid mismatch between fields")]
    GridMismatch,

    #[error("no single dispersion relation exists for a non-constant potential")]
    DispersionUndefined,

    #[error("wavenumber {k} is not of the form 2*pi*n/L on this grid")]
    NonCommensurateWavenumber { k: f64 },

    #[error("operation requires a second-order-in-time equation family, got {0}")]
    WrongEquationFamily(&'static str),

    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),

    #[error("field is identically zero")]
    ZeroField,

    #[error("need at least 3 snapshots, got {0}")]
    InsufficientSnapshots(usize),

    #[error("snapshot times are not uniformly spaced")]
    NonUniformTimes,

    #[error("delta_x must be positive, got {0}")]
    NonPositiveDeltaX(f64),

    #[error("invalid bracket [{lo}, {hi}]: {reason}")]
    InvalidBracket { lo: f64, hi: f64, reason: String },

    #[error("no convergence after {iterations} iterations (last energy change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("non-finite value detected at step {step}")]
    NonFinite { step: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
