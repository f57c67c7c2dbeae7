use thiserror::Error;

use crate::AtomDriveParams;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Rabi frequency must be positive for {0}")]
    ZeroRabi(&'static str),

    #[error("evaluation at a pole: s = {re} {im:+}i")]
    Pole { re: f64, im: f64 },

    #[error(
        "repeated roots of the correlation denominator (separation {separation:e}) for {params}"
    )]
    DegenerateRoots {
        params: AtomDriveParams,
        separation: f64,
    },

    #[error(
        "quadrature did not converge: estimated error {error:e} after {subdivisions} subdivisions"
    )]
    Quadrature { error: f64, subdivisions: usize },

    #[error("root finding did not converge after {iterations} iterations (u = {target})")]
    NoConvergence { iterations: usize, target: f64 },

    #[error("grid: {0}")]
    Grid(String),

    #[error("estimator: {0}")]
    Estimator(String),

    #[error("stream format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep its rendering.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(IoError(e.to_string()))
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
