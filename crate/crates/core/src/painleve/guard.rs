use rug::{Complex, Float};

use crate::error::{DegeneracyError, GapError, Result};
use crate::numerics::ArithContext;

/// Fails when `value` lies within `10^6 * eps` of `forbidden`.
pub(crate) fn avoid(
    value: &Complex,
    forbidden: &Complex,
    ctx: &ArithContext,
    location: &str,
    parameters: impl FnOnce() -> String,
) -> Result<()> {
    let gap = Float::with_val(ctx.precision_bits(), Complex::with_val(value.prec(), value - forbidden).abs_ref());
    if gap <= ctx.guard_threshold() {
        return Err(GapError::Degeneracy(DegeneracyError {
            location: location.to_string(),
            value: value.to_string_radix(10, Some(20)),
            parameters: parameters(),
        }));
    }
    Ok(())
}

pub(crate) fn avoid_real(
    value: &Float,
    forbidden: &Float,
    ctx: &ArithContext,
    location: &str,
    parameters: impl FnOnce() -> String,
) -> Result<()> {
    let gap = Float::with_val(ctx.precision_bits(), value - forbidden).abs();
    if gap <= ctx.guard_threshold() {
        return Err(GapError::Degeneracy(DegeneracyError {
            location: location.to_string(),
            value: value.to_string_radix(10, Some(20)),
            parameters: parameters(),
        }));
    }
    Ok(())
}
