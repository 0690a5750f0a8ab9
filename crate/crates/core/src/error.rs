use thiserror::Error;

use crate::scalar::Backend;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("backend mismatch: {left} vs {right}")]
    BackendMismatch { left: Backend, right: Backend },

    #[error("λ must be nonzero for {0}")]
    ZeroLambda(&'static str),

    #[error("series must not vanish at 0 for {0}")]
    VanishesAtOrigin(&'static str),

    #[error("series must vanish at 0 for {0}")]
    NonvanishingAtOrigin(&'static str),

    #[error("series is identically zero in {0}")]
    ZeroSeries(&'static str),

    #[error("operator does not lower degree: deg {before} -> deg {after}")]
    DegreeNotLowered { before: String, after: String },

    #[error("disk radius must be finite and positive, got {0}")]
    InvalidRadius(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
