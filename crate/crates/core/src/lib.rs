//! Discrete gap probabilities for the poissonized Plancherel measure and
//! z-measures, computed by three mutually validating routes: Toeplitz
//! determinants, truncated Fredholm determinants, and discrete Painlevé
//! recurrences, with combinatorial brute-force oracles alongside.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod determinants;
pub mod error;
pub mod kernels;
pub mod numerics;
pub mod oracles;
pub mod painleve;
pub mod par;

pub use error::{DegeneracyError, GapError, Result};
pub use kernels::{HalfInt, HypParams, KernelSpec};
pub use numerics::ArithContext;
