use thiserror::Error;

use crate::model::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large for exact solver ({n} vertices, cap {cap})")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("separation unattainable: no pair at distance >= {min_separation} after {attempts} attempts")]
    SeparationUnattainable { min_separation: f64, attempts: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("decomposition infeasible on axis {axis}: {reason}")]
    Decomposition { axis: usize, reason: String },

    #[error("point {vertex} at {coords:?} lies outside the decomposed region")]
    PointOutsideRegion { vertex: usize, coords: Vec<f64> },

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
