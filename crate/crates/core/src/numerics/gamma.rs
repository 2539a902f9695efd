use rug::ops::Pow;
use rug::{Complex, Float};

use super::ArithContext;
use crate::error::{GapError, Result};

fn is_nonpositive_integer(x: &Float) -> bool {
    x.is_integer() && x.cmp0().is_some_and(|o| o != std::cmp::Ordering::Greater)
}

/// `ln |Γ(x)|` for real `x`.
pub fn log_gamma(x: &Float, ctx: &ArithContext) -> Result<Float> {
    if is_nonpositive_integer(x) {
        return Err(GapError::Pole(format!("log_gamma at nonpositive integer {}", x.to_f64())));
    }
    let (value, _sign) = ctx.real(x).ln_abs_gamma();
    ctx.check_real(value, "log_gamma")
}

/// Principal branch of `ln Γ(z)` for complex `z`, analytic off `(-inf, 0]`.
///
/// Shifts `z` to the right until Stirling's series converges at context
/// precision, then undoes the shift with a sum of principal logarithms.
pub fn log_gamma_complex(z: &Complex, ctx: &ArithContext) -> Result<Complex> {
    if z.imag().is_zero() && is_nonpositive_integer(z.real()) {
        return Err(GapError::Pole(format!("log_gamma at nonpositive integer {}", z.real().to_f64())));
    }
    let work = ctx.widened(32);
    let prec = work.precision_bits();
    let threshold = 0.12 * prec as f64 + 10.0;

    let mut shifted = work.complex(z);
    let mut shift_log = work.complex(0);
    loop {
        let modulus = Float::with_val(prec, shifted.abs_ref()).to_f64();
        if shifted.real().to_f64() > 0.0 && modulus > threshold {
            break;
        }
        shift_log += Complex::with_val(prec, shifted.ln_ref());
        shifted += 1;
    }

    let half = work.real(0.5);
    let two_pi = work.real(2) * work.pi();
    let mut sum = Complex::with_val(prec, &shifted - &half) * Complex::with_val(prec, shifted.ln_ref());
    sum -= &shifted;
    sum += Float::with_val(prec, two_pi.ln_ref()) * &half;

    let inv = Complex::with_val(prec, shifted.recip_ref());
    let inv_sq = Complex::with_val(prec, inv.square_ref());
    let mut power = inv.clone();
    let tiny = work.unit_roundoff();
    for j in 1u32..10_000 {
        let b2j = bernoulli_even(j, prec);
        let denom = (2 * j) as u64 * (2 * j - 1) as u64;
        let term = Complex::with_val(prec, &power * &b2j) / denom;
        let term_mod = Float::with_val(prec, term.abs_ref());
        sum += &term;
        let sum_mod = Float::with_val(prec, sum.abs_ref());
        if term_mod < Float::with_val(prec, &tiny * &sum_mod) {
            break;
        }
        power *= &inv_sq;
    }
    sum -= shift_log;
    ctx.check_complex(ctx.complex(sum), "log_gamma_complex")
}

/// `B_{2j}` from `ζ(2j)`: `(-1)^{j+1} 2 (2j)! ζ(2j) / (2π)^{2j}`.
fn bernoulli_even(j: u32, prec: u32) -> Float {
    let two_j = 2 * j;
    let zeta = Float::with_val(prec, Float::zeta_u(two_j));
    let fact = Float::with_val(prec, Float::factorial(two_j));
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let denom = two_pi.pow(two_j);
    let mut b = zeta * fact * 2u32 / denom;
    if j.is_multiple_of(2) {
        b = -b;
    }
    b
}

/// `1/Γ(x)` for real `x`; exactly zero at the poles of Γ.
pub fn recip_gamma(x: &Float, ctx: &ArithContext) -> Result<Float> {
    if is_nonpositive_integer(x) {
        return Ok(ctx.zero());
    }
    let g = ctx.real(x).gamma();
    let g = ctx.check_real(g, "recip_gamma")?;
    Ok(g.recip())
}

/// `(a)_k = a (a+1) ... (a+k-1)` as a direct product.
pub fn pochhammer(a: &Float, k: u64, ctx: &ArithContext) -> Float {
    let mut acc = ctx.one();
    let mut factor = ctx.real(a);
    for _ in 0..k {
        acc *= &factor;
        factor += 1;
    }
    acc
}

pub fn pochhammer_complex(a: &Complex, k: u64, ctx: &ArithContext) -> Complex {
    let mut acc = ctx.complex(1);
    let mut factor = ctx.complex(a);
    for _ in 0..k {
        acc *= &factor;
        factor += 1;
    }
    acc
}

/// `n!` at context precision.
pub fn factorial(n: u32, ctx: &ArithContext) -> Float {
    ctx.real(Float::factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ArithContext {
        ArithContext::new(256).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: &Float) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= *tol
    }

    #[test]
    fn log_gamma_integers() {
        let ctx = ctx();
        let eps = ctx.eps();
        assert!(log_gamma(&ctx.real(1), &ctx).unwrap().is_zero());
        let ln24 = ctx.real(24).ln();
        assert!(close(&log_gamma(&ctx.real(5), &ctx).unwrap(), &ln24, &eps));
    }

    #[test]
    fn log_gamma_half_matches_reflection() {
        // Γ(1/2)^2 = π / sin(π/2)
        let ctx = ctx();
        let lg = log_gamma(&ctx.real(0.5), &ctx).unwrap();
        let half_ln_pi = ctx.pi().ln() / 2u32;
        assert!(close(&lg, &half_ln_pi, &ctx.eps()));
    }

    #[test]
    fn log_gamma_poles() {
        let ctx = ctx();
        assert!(matches!(log_gamma(&ctx.real(0), &ctx), Err(GapError::Pole(_))));
        assert!(matches!(log_gamma(&ctx.real(-3), &ctx), Err(GapError::Pole(_))));
        assert!(matches!(log_gamma_complex(&ctx.complex(-2), &ctx), Err(GapError::Pole(_))));
    }

    #[test]
    fn complex_log_gamma_agrees_on_real_axis() {
        let ctx = ctx();
        for x in [0.5, 1.0, 2.25, 7.5, 33.0] {
            let real = log_gamma(&ctx.real(x), &ctx).unwrap();
            let cplx = log_gamma_complex(&ctx.complex(x), &ctx).unwrap();
            assert!(close(cplx.real(), &real, &ctx.eps()), "x={x}");
            assert!(cplx.imag().clone().abs() <= ctx.eps());
        }
    }

    #[test]
    fn complex_log_gamma_recurrence() {
        // lnΓ(z+1) = lnΓ(z) + ln z away from the cut
        let ctx = ctx();
        let z = ctx.complex((1.5, 0.5));
        let lhs = log_gamma_complex(&Complex::with_val(256, &z + 1), &ctx).unwrap();
        let rhs = log_gamma_complex(&z, &ctx).unwrap() + Complex::with_val(256, z.ln_ref());
        let diff = Float::with_val(256, Complex::with_val(256, &lhs - &rhs).abs_ref());
        assert!(diff <= ctx.eps());
    }

    #[test]
    fn complex_log_gamma_reflection() {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let ctx = ctx();
        let z = ctx.complex((0.3, 0.8));
        let one_minus = Complex::with_val(256, 1 - &z);
        let lhs = log_gamma_complex(&z, &ctx).unwrap() + log_gamma_complex(&one_minus, &ctx).unwrap();
        let lhs = lhs.exp();
        let sin = Complex::with_val(256, &z * ctx.pi()).sin();
        let rhs = Complex::with_val(256, ctx.pi() / sin);
        let diff = Float::with_val(256, Complex::with_val(256, &lhs - &rhs).abs_ref());
        assert!(diff <= ctx.eps() * 16u32);
    }

    #[test]
    fn pochhammer_products() {
        let ctx = ctx();
        assert_eq!(pochhammer(&ctx.real(3), 4, &ctx), 360);
        assert_eq!(pochhammer(&ctx.real(-2), 3, &ctx), 0);
        assert_eq!(pochhammer(&ctx.real(-2), 2, &ctx), 2);
        assert_eq!(pochhammer(&ctx.real(0.5), 0, &ctx), 1);
        let c = pochhammer_complex(&ctx.complex((0.0, 1.0)), 2, &ctx);
        // i (i+1) = -1 + i
        assert_eq!(*c.real(), -1);
        assert_eq!(*c.imag(), 1);
    }

    #[test]
    fn recip_gamma_at_poles_is_zero() {
        let ctx = ctx();
        assert!(recip_gamma(&ctx.real(-4), &ctx).unwrap().is_zero());
        let r = recip_gamma(&ctx.real(4), &ctx).unwrap();
        assert!(close(&r, &(ctx.real(1) / 6u32), &ctx.eps()));
    }
}
