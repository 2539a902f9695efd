use rug::ops::Pow;
use rug::{Float, Integer};

use super::partitions::{hook_dim, partitions_of};
use super::tail::{poisson_tail, series_tail};
use crate::error::{GapError, Result};
use crate::kernels::HypParams;
use crate::numerics::ArithContext;
use crate::par;

/// Largest partition size the oracles enumerate.
pub const MAX_PARTITION_SIZE: usize = 30;

/// Truncation diagnostics of a partition-sum oracle.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub size_max: usize,
    /// Contribution of the partitions of size exactly `size_max`.
    pub last_shell: Float,
    /// `last_shell` over the contribution of the previous shell.
    pub shell_ratio: Float,
    /// `last_shell / (1 - shell_ratio)`: the last shell plus its geometric
    /// continuation; infinite when the ratio is not below 1.
    pub shell_bound: Float,
    /// Bound on the omitted mass from the unrestricted shell sums.
    pub tail_bound: Float,
}

fn check_size(size_max: usize) -> Result<()> {
    if size_max > MAX_PARTITION_SIZE {
        return Err(GapError::ResourceBound(format!(
            "partition enumeration is capped at size {MAX_PARTITION_SIZE}, got {size_max}"
        )));
    }
    Ok(())
}

/// Per-shell sums of `weight(λ)` over `λ_1 <= k`, `|λ| = n`, `n = 0..=size_max`.
fn shells<F>(k: usize, size_max: usize, ctx: &ArithContext, weight: F) -> Result<Vec<Float>>
where
    F: Fn(usize, &super::Partition) -> Result<Float> + Sync,
{
    par::try_map((0..=size_max).collect(), |n| {
        let mut acc = ctx.zero();
        for lambda in partitions_of(n, k) {
            acc += weight(n, &lambda)?;
        }
        Ok(acc)
    })
}

fn report(shells: &[Float], size_max: usize, tail_bound: Float, ctx: &ArithContext) -> OracleReport {
    let prec = ctx.precision_bits();
    let last = shells[size_max].clone();
    let ratio = if size_max == 0 || shells[size_max - 1].is_zero() {
        ctx.zero()
    } else {
        Float::with_val(prec, &last / &shells[size_max - 1])
    };
    let shell_bound = if ratio < 1 {
        Float::with_val(prec, &last / Float::with_val(prec, 1u32 - &ratio))
    } else {
        ctx.real(rug::float::Special::Infinity)
    };
    OracleReport { size_max, last_shell: last, shell_ratio: ratio, shell_bound, tail_bound }
}

/// `e^{-η²} Σ (dim λ η^{|λ|} / |λ|!)²` over `λ_1 <= k`, `|λ| <= size_max`.
pub fn plancherel_p_oracle(
    k: usize,
    eta: &Float,
    size_max: usize,
    ctx: &ArithContext,
) -> Result<(Float, OracleReport)> {
    check_size(size_max)?;
    if eta.is_sign_negative() && !eta.is_zero() || !eta.is_finite() {
        return Err(GapError::InvalidParameter(format!("eta must be >= 0, got {}", eta.to_f64())));
    }
    let work = ctx.widened(32);
    let prec = work.precision_bits();
    let x = Float::with_val(prec, eta.square_ref());
    let sums = shells(k, size_max, &work, |n, lambda| {
        let ratio = Float::with_val(prec, hook_dim(lambda))
            / Float::with_val(prec, Integer::from(Integer::factorial(n as u32)));
        let mut w = Float::with_val(prec, ratio.square_ref());
        w *= Float::with_val(prec, (&x).pow(n as u32));
        Ok(w)
    })?;
    let damping = Float::with_val(prec, -&x).exp();
    let total = sums.iter().fold(work.zero(), |acc, s| acc + s) * &damping;
    let tail = poisson_tail(&x, size_max, &work)? * &damping;
    let scaled: Vec<Float> = sums.into_iter().map(|s| s * &damping).collect();
    let rep = report(&scaled, size_max, tail, &work);
    Ok((ctx.real(total), round_report(rep, ctx)))
}

/// `(1-ξ)^{zz'} Σ Π_{cells}(c+z)(c+z') (dim λ / |λ|!)² ξ^{|λ|}` over
/// `λ_1 <= k`, `|λ| <= size_max`, for a real parameter pair.
pub fn zmeasure_q_oracle(
    k: usize,
    params: &HypParams,
    size_max: usize,
    ctx: &ArithContext,
) -> Result<(Float, OracleReport)> {
    check_size(size_max)?;
    if !params.is_real_pair() {
        return Err(GapError::InvalidParameter(format!("the z-measure oracle needs real z and z', got {params}")));
    }
    let work = ctx.widened(32);
    let prec = work.precision_bits();
    let z = work.real(params.z().real());
    let zp = work.real(params.zprime().real());
    let xi = work.real(params.xi());
    let sums = shells(k, size_max, &work, |n, lambda| {
        let mut w = Float::with_val(prec, hook_dim(lambda))
            / Float::with_val(prec, Integer::from(Integer::factorial(n as u32)));
        w.square_mut();
        for c in lambda.contents() {
            w *= Float::with_val(prec, &z + c);
            w *= Float::with_val(prec, &zp + c);
        }
        if w.is_sign_negative() && !w.is_zero() {
            return Err(GapError::InvariantViolation(format!("negative weight at λ = {lambda} for {params}")));
        }
        w *= Float::with_val(prec, (&xi).pow(n as u32));
        Ok(w)
    })?;
    let zzp = Float::with_val(prec, &z * &zp);
    let one_m_xi = Float::with_val(prec, 1u32 - &xi);
    let damping = Float::with_val(prec, Float::with_val(prec, one_m_xi.ln_ref()) * &zzp).exp();
    let total = sums.iter().fold(work.zero(), |acc, s| acc + s) * &damping;

    // full shells: Σ_{|λ|=n} weight = (zz')_n ξ^n / n!
    let mut first = work.one();
    for n in 0..=size_max {
        first *= Float::with_val(prec, &zzp + n as u32);
        first *= &xi;
        first /= (n + 1) as u32;
    }
    let tail = if first.is_zero() {
        work.zero()
    } else {
        series_tail(first, size_max, |n| Float::with_val(prec, &zzp + n as u32) * &xi / (n as u32 + 1), &xi, &work)?
            * &damping
    };
    let scaled: Vec<Float> = sums.into_iter().map(|s| s * &damping).collect();
    let rep = report(&scaled, size_max, tail, &work);
    Ok((ctx.real(total), round_report(rep, ctx)))
}

fn round_report(r: OracleReport, ctx: &ArithContext) -> OracleReport {
    OracleReport {
        size_max: r.size_max,
        last_shell: ctx.real(r.last_shell),
        shell_ratio: ctx.real(r.shell_ratio),
        shell_bound: ctx.real(r.shell_bound),
        tail_bound: ctx.real(r.tail_bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plancherel_at_zero_is_one() {
        let ctx = ArithContext::new(128).unwrap();
        let (v, rep) = plancherel_p_oracle(2, &ctx.zero(), 10, &ctx).unwrap();
        assert_eq!(v, 1);
        assert!(rep.tail_bound.is_zero());
    }

    #[test]
    fn caps_and_parameter_checks() {
        let ctx = ArithContext::new(128).unwrap();
        assert!(matches!(plancherel_p_oracle(2, &ctx.real(1), 31, &ctx), Err(GapError::ResourceBound(_))));
        let conj = HypParams::new(ctx.complex((1.5, 0.5)), ctx.complex((1.5, -0.5)), ctx.real(0.4)).unwrap();
        assert!(zmeasure_q_oracle(2, &conj, 10, &ctx).is_err());
    }

    #[test]
    fn zmeasure_unrestricted_total_is_normalized() {
        let ctx = ArithContext::new(128).unwrap();
        let params = HypParams::new(ctx.complex(1.25), ctx.complex(1.5), ctx.real(0.25)).unwrap();
        let (v, rep) = zmeasure_q_oracle(30, &params, 30, &ctx).unwrap();
        let missing = Float::with_val(128, 1u32 - &v);
        assert!(missing >= -ctx.eps());
        assert!(missing <= Float::with_val(128, &rep.tail_bound + ctx.eps()));
    }
}
