use thiserror::Error;

use crate::linprog::LpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("empty input point list")]
    EmptyInput,
    #[error("operation needs a nonempty set")]
    EmptySet,
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("body is not full-dimensional")]
    DegenerateBody,
    #[error("radius {lambda} is below the circumradius {circumradius}")]
    RadiusTooSmall { lambda: f64, circumradius: f64 },
    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid gauge body: {0}")]
    InvalidGauge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T> = std::result::Result<T, GeomError>;
