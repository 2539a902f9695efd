use rug::Float;

use super::linalg::{lu_det, lu_solve};
use crate::error::{GapError, Result};
use crate::kernels::{lattice_kernel, HalfInt, KernelSpec, LatticeKernel};
use crate::numerics::ArithContext;

/// Hard cap on the truncation size of the Fredholm driver.
pub const DEFAULT_TRUNCATION_CAP: usize = 4096;

/// How a truncated Fredholm quantity converged.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    /// Final window size `M`.
    pub size: usize,
    /// Diagonal tail `Σ K(x,x)` over the last doubled half of the window.
    pub tail: Float,
    /// Change between the last two window sizes.
    pub change: Float,
}

fn identity_minus(block: &[Float], n: usize, prec: u32) -> Vec<Float> {
    let mut a: Vec<Float> = block.iter().map(|v| Float::with_val(prec, -v)).collect();
    for i in 0..n {
        a[i * n + i] += 1u32;
    }
    a
}

fn diagonal_tail(block: &[Float], n: usize, from: usize, prec: u32) -> Float {
    (from..n).fold(Float::new(prec), |acc, i| acc + &block[i * n + i])
}

/// Runs the doubling loop: `evaluate(block, n)` gives the quantity on a
/// window of size `n`; stops when both the diagonal tail of the new half
/// and the change fall below `tol`.
fn doubling<F>(
    kernel: &dyn LatticeKernel,
    s: HalfInt,
    tol: &Float,
    cap: usize,
    ctx: &ArithContext,
    evaluate: F,
) -> Result<(Float, TruncationReport)>
where
    F: Fn(&[Float], usize) -> Result<Float>,
{
    if !s.is_positive() {
        return Err(GapError::Domain(format!("Fredholm determinants are defined here for s >= 1/2, got {s}")));
    }
    if !(*tol > 0) {
        return Err(GapError::InvalidParameter("tolerance must be positive".into()));
    }
    let prec = ctx.precision_bits();
    let mut m = kernel.initial_size().clamp(1, cap);
    let first = kernel.block(s, m, ctx)?;
    let mut previous = evaluate(&first, m)?;
    loop {
        let n = 2 * m;
        if n > cap {
            return Err(GapError::NonConvergence(format!("Fredholm truncation at s={s} needs more than {cap} points")));
        }
        let block = kernel.block(s, n, ctx)?;
        let value = evaluate(&block, n)?;
        let tail = diagonal_tail(&block, n, m, prec);
        let change = Float::with_val(prec, &value - &previous).abs();
        if tail < *tol && change < *tol {
            return Ok((value, TruncationReport { size: n, tail, change }));
        }
        previous = value;
        m = n;
    }
}

/// `det(1 - K_s)` for a lattice kernel, truncated adaptively.
pub fn fredholm_gap_with(
    kernel: &dyn LatticeKernel,
    s: HalfInt,
    tol: &Float,
    cap: usize,
    ctx: &ArithContext,
) -> Result<(Float, TruncationReport)> {
    let prec = ctx.precision_bits();
    doubling(kernel, s, tol, cap, ctx, |block, n| {
        let det = lu_det(identity_minus(block, n, prec), n);
        ctx.check_real(ctx.real(det), "fredholm_gap")
    })
}

/// `D_s = det(1 - K_s)` with `K_s` the kernel restricted to `{s, s+1, ...}`.
pub fn fredholm_gap(
    spec: &KernelSpec,
    s: HalfInt,
    tol: &Float,
    ctx: &ArithContext,
) -> Result<(Float, TruncationReport)> {
    fredholm_gap_with(lattice_kernel(spec).as_ref(), s, tol, DEFAULT_TRUNCATION_CAP, ctx)
}

/// `R_s(s,s)` for `R_s = K_s (1 - K_s)^{-1}`, by solving `(1 - K) u = K e_s`.
pub fn resolvent_diag_with(
    kernel: &dyn LatticeKernel,
    s: HalfInt,
    tol: &Float,
    cap: usize,
    ctx: &ArithContext,
) -> Result<(Float, TruncationReport)> {
    let prec = ctx.precision_bits();
    doubling(kernel, s, tol, cap, ctx, |block, n| {
        let rhs: Vec<Float> = (0..n).map(|i| block[i * n].clone()).collect();
        let u = lu_solve(identity_minus(block, n, prec), n, rhs)?;
        ctx.check_real(u[0].clone(), "resolvent_diag")
    })
}

pub fn resolvent_diag(
    spec: &KernelSpec,
    s: HalfInt,
    tol: &Float,
    ctx: &ArithContext,
) -> Result<(Float, TruncationReport)> {
    resolvent_diag_with(lattice_kernel(spec).as_ref(), s, tol, DEFAULT_TRUNCATION_CAP, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct ZeroKernel;

    impl LatticeKernel for ZeroKernel {
        fn block(&self, _s: HalfInt, size: usize, ctx: &ArithContext) -> Result<Vec<Float>> {
            Ok(vec![ctx.zero(); size * size])
        }
        fn initial_size(&self) -> usize {
            4
        }
    }

    #[test]
    fn zero_kernel_is_exact() {
        let ctx = ArithContext::new(128).unwrap();
        let tol = ctx.real(1e-20);
        let (d, report) = fredholm_gap_with(&ZeroKernel, HalfInt::HALF, &tol, 64, &ctx).unwrap();
        assert_eq!(d, 1);
        assert_eq!(report.size, 8);
        let (r, _) = resolvent_diag_with(&ZeroKernel, HalfInt::HALF, &tol, 64, &ctx).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn rejects_negative_s_and_bad_tol() {
        let ctx = ArithContext::new(128).unwrap();
        assert!(fredholm_gap_with(&ZeroKernel, HalfInt::new(-1), &ctx.real(1e-10), 64, &ctx).is_err());
        assert!(fredholm_gap_with(&ZeroKernel, HalfInt::HALF, &ctx.real(0), 64, &ctx).is_err());
    }

    /// A kernel whose diagonal never decays hits the cap.
    struct Stubborn;

    impl LatticeKernel for Stubborn {
        fn block(&self, _s: HalfInt, size: usize, ctx: &ArithContext) -> Result<Vec<Float>> {
            let mut b = vec![ctx.zero(); size * size];
            for i in 0..size {
                b[i * size + i] = ctx.real(0.25);
            }
            Ok(b)
        }
        fn initial_size(&self) -> usize {
            16
        }
    }

    #[test]
    fn non_decaying_kernel_hits_cap() {
        let ctx = ArithContext::new(64).unwrap();
        let res = fredholm_gap_with(&Stubborn, HalfInt::HALF, &ctx.real(1e-10), 128, &ctx);
        assert!(matches!(res, Err(GapError::NonConvergence(_))));
    }
}
