use rug::{Complex, Float};

use super::{ArithContext, STOP_RUN};
use crate::error::{GapError, Result};

const MAX_TERMS: u64 = 2_000_000;

/// If `x` is a nonpositive integer `-n`, returns `n`.
fn nonpositive_integer(x: &Complex) -> Option<u64> {
    if !x.imag().is_zero() {
        return None;
    }
    let re = x.real();
    if re.is_integer() && !re.is_sign_positive() || re.is_zero() {
        let n = Float::with_val(re.prec(), -re).to_integer()?;
        return n.to_u64();
    }
    None
}

/// Gauss hypergeometric `F(a, b; c; u)` by its power series.
///
/// Requires `|u| < 1` unless the series terminates. A nonpositive-integer `c`
/// is accepted only when the series stops before the pole.
pub fn gauss_2f1(a: &Complex, b: &Complex, c: &Complex, u: &Complex, ctx: &ArithContext) -> Result<Complex> {
    let degree = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(pole) = nonpositive_integer(c) {
        if degree.is_none_or(|d| d > pole) {
            return Err(GapError::Pole(format!(
                "2F1 with c = -{pole} and a series that does not terminate before the pole"
            )));
        }
    }
    if u.real().is_zero() && u.imag().is_zero() {
        return Ok(ctx.complex(1));
    }
    if degree.is_none() {
        let modulus = Float::with_val(ctx.precision_bits(), u.abs_ref());
        if modulus >= 1 {
            return Err(GapError::Domain(format!(
                "2F1 series diverges at |u| = {} (not terminating)",
                modulus.to_f64()
            )));
        }
    }

    let mut guard = 64u32;
    for _ in 0..6 {
        let work = ctx.widened(guard);
        let (sum, cancellation) = series(a, b, c, u, degree, &work)?;
        if cancellation + 24 < guard as i64 {
            return ctx.check_complex(ctx.complex(&sum), "gauss_2f1");
        }
        guard = cancellation.max(0) as u32 + 64;
    }
    Err(GapError::PrecisionInsufficient("2F1 cancellation could not be covered".into()))
}

fn series(
    a: &Complex,
    b: &Complex,
    c: &Complex,
    u: &Complex,
    degree: Option<u64>,
    work: &ArithContext,
) -> Result<(Complex, i64)> {
    let prec = work.precision_bits();
    let mut ak = work.complex(a);
    let mut bk = work.complex(b);
    let mut ck = work.complex(c);
    let uw = work.complex(u);
    let tiny = work.unit_roundoff();

    let mut term = work.complex(1);
    let mut sum = work.complex(1);
    let mut max_exp = 1i32;
    let mut quiet = 0;
    let mut j: u64 = 0;
    loop {
        if let Some(d) = degree {
            if j >= d {
                break;
            }
        } else if quiet >= STOP_RUN {
            break;
        }
        let num = Complex::with_val(prec, &ak * &bk);
        let den = Complex::with_val(prec, &ck * (j + 1));
        term *= num;
        term /= den;
        term *= &uw;
        sum += &term;
        j += 1;
        ak += 1;
        bk += 1;
        ck += 1;

        let term_mod = Float::with_val(prec, term.abs_ref());
        if let Some(e) = term_mod.get_exp() {
            max_exp = max_exp.max(e);
        }
        let sum_mod = Float::with_val(prec, sum.abs_ref());
        if term_mod.is_zero() || term_mod < Float::with_val(prec, &sum_mod * &tiny) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if j > MAX_TERMS {
            return Err(GapError::NonConvergence("2F1 series exceeded term cap".into()));
        }
    }
    let sum_mod = Float::with_val(prec, sum.abs_ref());
    let cancellation = match sum_mod.get_exp() {
        Some(e) => max_exp as i64 - e as i64,
        None => prec as i64,
    };
    Ok((sum, cancellation))
}

/// `F(a, b; c; ξ/(ξ-1))` evaluated through the Pfaff transformation as
/// `(1-ξ)^a F(a, c-b; c; ξ)`; valid for `|ξ| < 1` even though the
/// transformed argument may lie outside the unit disc.
pub fn gauss_2f1_pfaff(a: &Complex, b: &Complex, c: &Complex, xi: &Complex, ctx: &ArithContext) -> Result<Complex> {
    let prec = ctx.precision_bits();
    if xi.real().is_zero() && xi.imag().is_zero() {
        return Ok(ctx.complex(1));
    }
    if Float::with_val(prec, xi.abs_ref()) >= 1 {
        return Err(GapError::Domain("gauss_2f1_pfaff requires |ξ| < 1".into()));
    }
    let work = ctx.widened(16);
    let c_minus_b = Complex::with_val(work.precision_bits(), c - b);
    let f = gauss_2f1(a, &c_minus_b, c, xi, &work)?;
    let one_minus = Complex::with_val(work.precision_bits(), 1 - xi);
    let factor = Complex::with_val(work.precision_bits(), one_minus.ln() * a).exp();
    ctx.check_complex(ctx.complex(f * factor), "gauss_2f1_pfaff")
}

/// Convenience for real parameters.
pub fn gauss_2f1_real(a: f64, b: f64, c: f64, u: f64, ctx: &ArithContext) -> Result<Complex> {
    gauss_2f1(&ctx.complex(a), &ctx.complex(b), &ctx.complex(c), &ctx.complex(u), ctx)
}
