use rug::Float;

use crate::error::{GapError, Result};
use crate::numerics::ArithContext;

/// Upper bound on `Σ_{n > start} t_n` for a positive series given its first
/// omitted term `t_{start+1}` and the term ratio `t_{n+1}/t_n` as a function
/// of `n`, where the ratios tend to a limit `limit < 1`.
///
/// Terms are summed until the ratio has dropped below 1 and the term below
/// the sum's last bit; the remainder is then bounded geometrically by the
/// larger of the current ratio and `limit`.
pub(crate) fn series_tail(
    first: Float,
    start: usize,
    ratio: impl Fn(usize) -> Float,
    limit: &Float,
    ctx: &ArithContext,
) -> Result<Float> {
    let prec = ctx.precision_bits();
    let tiny = ctx.unit_roundoff();
    let mut term = first;
    let mut sum = ctx.zero();
    let mut n = start + 1;
    loop {
        sum += &term;
        let r = ratio(n);
        let rho = Float::with_val(prec, r.max_ref(limit));
        if rho < 1 && term <= Float::with_val(prec, &sum * &tiny) {
            let rest = Float::with_val(prec, &term * &rho) / (1u32 - rho);
            return Ok(sum + rest);
        }
        term *= r;
        n += 1;
        if n > start + 10_000_000 {
            return Err(GapError::NonConvergence("tail series".into()));
        }
    }
}

/// `Σ_{n > n_max} x^n/n!`.
pub(crate) fn poisson_tail(x: &Float, n_max: usize, ctx: &ArithContext) -> Result<Float> {
    let prec = ctx.precision_bits();
    if x.is_zero() {
        return Ok(ctx.zero());
    }
    let mut first = ctx.one();
    for n in 1..=n_max + 1 {
        first *= x;
        first /= n as u32;
    }
    series_tail(first, n_max, |n| Float::with_val(prec, x / (n as u32 + 1)), &ctx.zero(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_tail_of_exponential() {
        let ctx = ArithContext::new(128).unwrap();
        let x = ctx.real(0.75);
        // e^x - (1 + x + x²/2)
        let exact = Float::with_val(128, x.exp_ref()) - 1u32 - &x - Float::with_val(128, x.square_ref()) / 2u32;
        let bound = poisson_tail(&x, 2, &ctx).unwrap();
        assert!(bound >= exact);
        assert!(Float::with_val(128, &bound - &exact) < ctx.eps());
    }
}
