//! Determinant routes to `D_s`: Toeplitz determinants of the model symbols
//! and adaptively truncated Fredholm determinants `det(1 - K_s)`, plus the
//! resolvent diagonal.

mod fredholm;
mod linalg;
mod table;
mod toeplitz;

pub use fredholm::{
    fredholm_gap, fredholm_gap_with, resolvent_diag, resolvent_diag_with, TruncationReport, DEFAULT_TRUNCATION_CAP,
};
pub use linalg::{lu_det, lu_solve};
pub use table::{gap_table, GapTable, Method};
pub use toeplitz::{toeplitz_gap, toeplitz_precision_hint, ToeplitzSymbol};
