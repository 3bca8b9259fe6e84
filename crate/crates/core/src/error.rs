//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample value at index {index} is not a positive finite number ({value})")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("need k < n upper order statistics, got k = {k} with n = {n}")]
    InsufficientData { k: usize, n: usize },

    #[error("threshold order statistic is not positive")]
    InvalidThreshold,

    #[error("observation {value} lies below the support [1, inf)")]
    OutOfSupport { value: f64 },

    #[error("energy score moments diverge: beta = {beta} must be < 1/gamma = {bound}")]
    MomentDivergence { beta: f64, bound: f64 },

    #[error("CRPS variance formula is singular at gamma = 1")]
    SingularParameter,

    #[error("beta = {beta} is not valid here (requires 0 < beta < {bound})")]
    InvalidBeta { beta: f64, bound: f64 },

    #[error("tail counterpart is degenerate: base cdf reaches 1 at the threshold")]
    DegenerateThreshold,

    #[error("stability range is empty")]
    EmptyStabilityRange,

    #[error("stability value k = {k} is not covered by every curve")]
    MissingPoint { k: usize },

    #[error("quadrature failed to reach the requested tolerance ({what})")]
    Numerical { what: String },
}
