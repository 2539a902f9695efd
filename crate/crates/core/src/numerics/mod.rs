//! Arbitrary-precision arithmetic context and special functions.
//!
//! Values are [`rug::Float`] / [`rug::Complex`] carried at the precision of an
//! [`ArithContext`]. Series are summed until [`STOP_RUN`] consecutive terms
//! fall below `2^-prec` relative to the partial sum.

mod bessel;
mod context;
mod gamma;
mod hypergeometric;
mod scalar;

pub use bessel::{bessel_i, bessel_j};
pub use context::{ArithContext, DEFAULT_GUARD_BITS, MIN_PRECISION_BITS};
pub use gamma::{factorial, log_gamma, log_gamma_complex, pochhammer, pochhammer_complex, recip_gamma};
pub use hypergeometric::{gauss_2f1, gauss_2f1_pfaff, gauss_2f1_real};
pub use scalar::Scalar;

/// Real and complex multiprecision scalars.
pub type HPReal = rug::Float;
pub type HPComplex = rug::Complex;

/// Consecutive negligible terms required before a series is declared summed.
pub const STOP_RUN: usize = 20;
