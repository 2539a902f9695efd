//! The fast routes: dPII and dPV recurrences with their special-function
//! initial values, the induced O(k) gap-probability recursions, and the
//! degeneration and scaling-limit diagnostics.

mod dp2;
mod dp5;
mod guard;
mod limits;

pub use dp2::{
    dp2_b_series, dp2_gap_series, dp2_init, dp2_orbit, dp2_orbit_checked, dp2_step, DP2State, MAX_ORBIT_BITS,
};
pub use dp5::{
    dp5_back_step, dp5_gap_series, dp5_init, dp5_orbit, dp5_ratio_residual, dp5_step, two_variable_orbit, DP5State,
};
pub use limits::{dp2_pii_residual, dp5_to_dp2_check, LimitRow, PiiPoint};
