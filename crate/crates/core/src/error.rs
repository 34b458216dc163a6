use thiserror::Error;

use crate::rates::Link;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("anchor vector has zero norm")]
    ZeroAnchor,

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:e}, trace {trace:e})")]
    NotPsd { min_eigenvalue: f64, trace: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rate {rate} for link {link} is outside [{min}, {max}]")]
    RateOutOfRange {
        link: Link,
        rate: f64,
        min: f64,
        max: f64,
    },

    #[error("target ({r1}, {r2}) is outside the suspicious region: {boundary}")]
    OutsideRegion { r1: f64, r2: f64, boundary: String },

    #[error("null-space jamming unavailable: N_t = {nt} does not exceed rank(H_ee) = {rank}")]
    NullSpaceUnavailable { nt: usize, rank: usize },

    #[error("point ({r1}, {r2}) is outside the eavesdropping region")]
    OutsideEavesRegion { r1: f64, r2: f64 },

    #[error("{0} is outside the time-sharing bracket")]
    OutsideBracket(f64),

    #[error("achieving set is empty")]
    EmptyAchievingSet,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
