use thiserror::Error;

use crate::holonomy::HolonomyResult;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Failure of the refining holonomy integrator.
#[derive(Debug, Error, Clone)]
pub enum IntegrationError<T: Real> {
    #[error(transparent)]
    Invalid(#[from] Error),
    /// Tolerance not reached within the step budget; carries the finest estimate.
    #[error(
        "holonomy did not converge: error estimate {:e} after {} steps",
        .0.estimated_error, .0.steps_used
    )]
    NotConverged(Box<HolonomyResult<T>>),
}
