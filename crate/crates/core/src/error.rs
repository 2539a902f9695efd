use std::fmt;

use thiserror::Error;

/// Errors raised anywhere in the numeric stack.
#[derive(Debug, Error)]
pub enum GapError {
    #[error("invalid precision: {0} bits (minimum is 64)")]
    InvalidPrecision(u32),

    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("truncation did not converge: {0}")]
    NonConvergence(String),

    #[error(transparent)]
    Degeneracy(#[from] DegeneracyError),

    #[error("degenerate difference at k={k}: division blocked in the ratio recursion")]
    DegenerateDifference { k: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}

pub type Result<T> = std::result::Result<T, GapError>;

/// A genericity guard tripped: some quantity came within `10^6 * eps` of a value
/// for which the recurrence is undefined.
#[derive(Debug, Clone, Error)]
pub struct DegeneracyError {
    /// Which guard fired, e.g. `"dp2_step: x_n^2 = 1"`.
    pub location: String,
    /// The offending quantity, printed as a decimal string.
    pub value: String,
    /// Model parameters and lattice position, for diagnostics.
    pub parameters: String,
}

impl fmt::Display for DegeneracyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "non-generic parameters: guard `{}` tripped (value {}; {})",
            self.location, self.value, self.parameters
        )
    }
}
