use rug::Float;

use super::guard::avoid_real;
use crate::determinants::{GapTable, Method};
use crate::error::{GapError, Result};
use crate::kernels::{HalfInt, KernelSpec};
use crate::numerics::{bessel_i, ArithContext};

/// Rolling state `(n, x_{n-1}, x_n)` of the dPII recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct DP2State {
    pub n: u64,
    pub x_prev: Float,
    pub x_cur: Float,
    pub eta: Float,
}

fn check_eta(eta: &Float) -> Result<()> {
    if !(eta.is_finite() && *eta > 0) {
        return Err(GapError::InvalidParameter(format!("eta must be positive, got {}", eta.to_f64())));
    }
    Ok(())
}

/// State at `n = 1`: `x_0 = -1`, `x_1 = I_1(2η)/I_0(2η)`.
pub fn dp2_init(eta: &Float, ctx: &ArithContext) -> Result<DP2State> {
    check_eta(eta)?;
    let eta = ctx.real(eta);
    let u = Float::with_val(ctx.precision_bits(), &eta * 2u32);
    let x1 = bessel_i(1, &u, ctx)? / bessel_i(0, &u, ctx)?;
    Ok(DP2State { n: 1, x_prev: ctx.real(-1), x_cur: x1, eta })
}

/// `x_{n+1} = n x_n / (η (x_n^2 - 1)) - x_{n-1}`.
pub fn dp2_step(state: &DP2State, ctx: &ArithContext) -> Result<DP2State> {
    let prec = ctx.precision_bits();
    let sq = Float::with_val(prec, state.x_cur.square_ref());
    avoid_real(&sq, &ctx.one(), ctx, "dp2_step: x_n^2 = 1", || {
        format!("eta={} n={}", state.eta.to_string_radix(10, Some(17)), state.n)
    })?;
    let denom = (sq - 1u32) * &state.eta;
    let mut next = Float::with_val(prec, &state.x_cur * state.n) / denom;
    next -= &state.x_prev;
    Ok(DP2State { n: state.n + 1, x_prev: state.x_cur.clone(), x_cur: next, eta: state.eta.clone() })
}

/// `x_0, ..., x_{n_max}`.
pub fn dp2_orbit(eta: &Float, n_max: usize, ctx: &ArithContext) -> Result<Vec<Float>> {
    let mut state = dp2_init(eta, ctx)?;
    let mut xs = vec![state.x_prev.clone()];
    if n_max >= 1 {
        xs.push(state.x_cur.clone());
    }
    while xs.len() <= n_max {
        state = dp2_step(&state, ctx)?;
        xs.push(state.x_cur.clone());
    }
    Ok(xs)
}

/// Largest working precision [`dp2_orbit_checked`] will try.
pub const MAX_ORBIT_BITS: u32 = 1 << 18;

/// [`dp2_orbit`] with the forward instability accounted for: the orbit is
/// recomputed at twice the working precision until both runs agree to
/// `ctx.eps()` at every index. Starts from about `8η` extra bits, which is
/// usually enough. Returns the orbit rounded to `ctx` and the working
/// precision that passed.
pub fn dp2_orbit_checked(eta: &Float, n_max: usize, ctx: &ArithContext) -> Result<(Vec<Float>, u32)> {
    check_eta(eta)?;
    let extra = (eta.to_f64() * 8.0).ceil().min(MAX_ORBIT_BITS as f64) as u32;
    let mut bits = ctx.precision_bits() + RECURRENCE_GUARD_BITS + extra;
    let tol = ctx.eps();
    let mut coarse = dp2_orbit(eta, n_max, &ctx.with_precision(bits))?;
    while bits <= MAX_ORBIT_BITS {
        let fine = dp2_orbit(eta, n_max, &ctx.with_precision(bits * 2))?;
        let agree = coarse.iter().zip(&fine).all(|(a, b)| Float::with_val(bits, a - b).abs() <= tol);
        if agree {
            return Ok((coarse.into_iter().map(|x| ctx.real(x)).collect(), bits));
        }
        coarse = fine;
        bits *= 2;
    }
    Err(GapError::ResourceBound(format!(
        "dPII orbit to n = {n_max} at eta = {} not stable below {MAX_ORBIT_BITS} bits",
        eta.to_f64()
    )))
}

/// Extra working bits for the recurrences.
pub(crate) const RECURRENCE_GUARD_BITS: u32 = 32;

/// `p_0, ..., p_{k_max}` from `p_0 = e^{-η²}`, `p_1 = e^{-η²} I_0(2η)` and
/// `p_{k+1} = (1 - x_k²) p_k² / p_{k-1}`.
///
/// Once `1 - p_k <= eps` the remaining entries are set to 1: the table is a
/// nondecreasing function bounded by 1, so this is exact to `eps`, and it
/// avoids running the forward recurrence deep into the region where its
/// decaying solution is unstable.
pub fn dp2_gap_series(eta: &Float, k_max: usize, ctx: &ArithContext) -> Result<GapTable> {
    check_eta(eta)?;
    let work = ctx.widened(RECURRENCE_GUARD_BITS);
    let prec = work.precision_bits();
    let eta_w = work.real(eta);
    let spec = KernelSpec::bessel(ctx.real(eta))?;
    let p0 = (-Float::with_val(prec, eta_w.square_ref())).exp();
    let i0 = bessel_i(0, &Float::with_val(prec, &eta_w * 2u32), &work)?;
    let mut ps = vec![p0.clone()];
    if k_max >= 1 {
        ps.push(p0 * i0);
    }
    let mut notes = vec![String::new(); k_max + 1];
    let saturation = ctx.eps();
    let mut state = dp2_init(&eta_w, &work)?;
    let mut k = 1;
    while ps.len() <= k_max {
        let last = &ps[k];
        if Float::with_val(prec, 1u32 - last) <= saturation {
            for note in &mut notes[ps.len()..] {
                *note = format!("saturated@{k}");
            }
            ps.resize(k_max + 1, work.one());
            break;
        }
        if k > 1 {
            state = dp2_step(&state, &work)?;
        }
        let one_minus = 1u32 - Float::with_val(prec, state.x_cur.square_ref());
        let next = one_minus * Float::with_val(prec, ps[k].square_ref()) / &ps[k - 1];
        if !(next > 0) {
            return Err(GapError::InvariantViolation(format!("p_{} = {} is not positive", k + 1, next.to_f64())));
        }
        ps.push(next);
        k += 1;
    }
    let values = ps.into_iter().map(|p| ctx.real(p)).collect();
    let mut table = GapTable::new(spec, Method::Recurrence, ctx.precision_bits(), values);
    table.notes = notes;
    Ok(table)
}

/// `b_{1/2}, ..., b_{s_max}` with `b_{1/2} = I_0(2η)`, `b_{s+1} = b_s (1 - v_s²)`
/// and `v_{n-1/2} = x_n`. These are the ratios `D_{s+1}/D_s`.
pub fn dp2_b_series(eta: &Float, s_max: HalfInt, ctx: &ArithContext) -> Result<Vec<Float>> {
    check_eta(eta)?;
    let count =
        s_max.index().ok_or_else(|| GapError::Domain(format!("dp2_b_series needs s_max >= 1/2, got {s_max}")))?;
    let work = ctx.widened(RECURRENCE_GUARD_BITS);
    let prec = work.precision_bits();
    let eta_w = work.real(eta);
    let xs = dp2_orbit(&eta_w, count, &work)?;
    let mut b = bessel_i(0, &Float::with_val(prec, &eta_w * 2u32), &work)?;
    let mut out = vec![ctx.real(&b)];
    for x in xs.iter().skip(1).take(count) {
        b *= 1u32 - Float::with_val(prec, x.square_ref());
        out.push(ctx.real(&b));
    }
    Ok(out)
}
