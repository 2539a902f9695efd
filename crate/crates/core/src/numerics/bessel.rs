use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Float;

use super::gamma::recip_gamma;
use super::{ArithContext, STOP_RUN};
use crate::error::{GapError, Result};

/// `J_ν(u)` for real order and `u >= 0`, by the power series
/// `Σ (-1)^m (u/2)^{ν+2m} / (m! Γ(ν+m+1))`.
///
/// The series is summed with guard bits sized to the cancellation
/// (`≈ u·log2(e)` bits); if the measured cancellation exceeds the guard the
/// sum is repeated at a wider precision.
pub fn bessel_j(nu: &Float, u: &Float, ctx: &ArithContext) -> Result<Float> {
    if u.is_sign_negative() && !u.is_zero() {
        return Err(GapError::Domain(format!("bessel_j requires u >= 0, got {}", u.to_f64())));
    }
    if nu.is_integer() && nu.is_sign_negative() && !nu.is_zero() {
        let n = -nu.clone();
        let value = bessel_j(&n, u, ctx)?;
        let odd = n.to_integer().is_some_and(|i| i.is_odd());
        return Ok(if odd { -value } else { value });
    }
    if u.is_zero() {
        return match nu.cmp0() {
            Some(Ordering::Equal) => Ok(ctx.one()),
            Some(Ordering::Greater) => Ok(ctx.zero()),
            _ => Err(GapError::Domain(format!("J_ν(0) is infinite for negative non-integer ν = {}", nu.to_f64()))),
        };
    }

    let mut guard = 32 + (u.to_f64() * std::f64::consts::LOG2_E).ceil() as u32;
    for _ in 0..6 {
        let work = ctx.widened(guard);
        let (sum, cancellation) = j_series(nu, u, &work)?;
        if cancellation + 24 < guard as i64 {
            return ctx.check_real(ctx.real(&sum), "bessel_j");
        }
        guard = (cancellation.max(0) as u32) + 64;
    }
    Err(GapError::PrecisionInsufficient(format!(
        "bessel_j cancellation could not be covered at order {} argument {}",
        nu.to_f64(),
        u.to_f64()
    )))
}

/// Returns the sum and the cancellation in bits, `log2(max|term| / |sum|)`.
fn j_series(nu: &Float, u: &Float, work: &ArithContext) -> Result<(Float, i64)> {
    let prec = work.precision_bits();
    let half_u = Float::with_val(prec, u / 2u32);
    let neg_quarter_sq = -Float::with_val(prec, half_u.square_ref());
    let nu_w = work.real(nu);

    let mut term = Float::with_val(prec, (&half_u).pow(&nu_w));
    term *= recip_gamma(&Float::with_val(prec, &nu_w + 1u32), work)?;
    let mut sum = term.clone();
    let mut max_exp = term.get_exp().unwrap_or(i32::MIN);
    let tiny = work.unit_roundoff();
    let mut quiet = 0;
    let mut m: u64 = 0;
    while quiet < STOP_RUN {
        m += 1;
        let denom = Float::with_val(prec, &nu_w + m) * m;
        term *= &neg_quarter_sq;
        term /= denom;
        sum += &term;
        if let Some(e) = term.get_exp() {
            max_exp = max_exp.max(e);
        }
        let bound = Float::with_val(prec, sum.abs_ref()) * &tiny;
        if term.is_zero() || Float::with_val(prec, term.abs_ref()) < bound {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if m > 1_000_000 {
            return Err(GapError::NonConvergence("bessel_j series".into()));
        }
    }
    let cancellation = match sum.get_exp() {
        Some(e) => max_exp as i64 - e as i64,
        None => prec as i64,
    };
    Ok((sum, cancellation))
}

/// `I_n(u)` for integer order; `I_{-n} = I_n`.
pub fn bessel_i(n: i64, u: &Float, ctx: &ArithContext) -> Result<Float> {
    if u.is_sign_negative() && !u.is_zero() {
        return Err(GapError::Domain(format!("bessel_i requires u >= 0, got {}", u.to_f64())));
    }
    let order = n.unsigned_abs();
    if u.is_zero() {
        return Ok(if order == 0 { ctx.one() } else { ctx.zero() });
    }
    let work = ctx.widened(16);
    let prec = work.precision_bits();
    let half_u = Float::with_val(prec, u / 2u32);
    let quarter_sq = Float::with_val(prec, half_u.square_ref());

    let order_u32 = u32::try_from(order).map_err(|_| GapError::Domain(format!("bessel_i order {n} too large")))?;
    let mut term = Float::with_val(prec, (&half_u).pow(order_u32));
    term /= Float::with_val(prec, Float::factorial(order_u32));
    let mut sum = term.clone();
    let tiny = work.unit_roundoff();
    let mut quiet = 0;
    let mut m: u64 = 0;
    while quiet < STOP_RUN {
        m += 1;
        term *= &quarter_sq;
        term /= m * (order + m);
        sum += &term;
        if term < Float::with_val(prec, &sum * &tiny) {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }
    ctx.check_real(ctx.real(&sum), "bessel_i")
}
