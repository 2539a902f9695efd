use rug::{Complex, Float};

use super::dp2::dp2_orbit_checked;
use super::dp5::dp5_orbit;
use crate::determinants::ToeplitzSymbol;
use crate::error::{GapError, Result};
use crate::kernels::{HalfInt, HypParams, KernelSpec};
use crate::numerics::ArithContext;

/// One grid point of the scaled dPII-to-PII comparison.
#[derive(Debug, Clone)]
pub struct PiiPoint {
    /// Requested scaling variable.
    pub t: f64,
    /// Lattice point nearest to `2η + η^{1/3} t`.
    pub s: HalfInt,
    /// `(s - 2η) η^{-1/3}`, the scaling variable of that lattice point.
    pub t_s: Float,
    /// `(-1)^{s+1/2} η^{1/3} v_s`.
    pub v: Float,
    pub second_diff: Float,
    pub residual: Float,
}

/// Residual of the continuum equation `v'' = t v + 2 v³` for the scaled dPII
/// orbit at each requested `t`, using [`dp2_orbit_checked`]. The second derivative is the lattice second
/// difference divided by the squared lattice step `η^{-2/3}`.
pub fn dp2_pii_residual(eta: &Float, t_grid: &[f64], ctx: &ArithContext) -> Result<Vec<PiiPoint>> {
    let prec = ctx.precision_bits();
    let eta = ctx.real(eta);
    let cube_root = Float::with_val(prec, eta.cbrt_ref());
    let two_eta = Float::with_val(prec, &eta * 2u32);
    let mut lattice = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let pos = Float::with_val(prec, &cube_root * t) + &two_eta;
        // nearest half-integer n + 1/2
        let n = Float::with_val(prec, pos - 0.5).round().to_f64() as i64;
        if n < 1 {
            return Err(GapError::Domain(format!("t = {t} maps below the lattice start for eta = {}", eta.to_f64())));
        }
        lattice.push(HalfInt::new(n));
    }
    let top = lattice.iter().map(|s| s.floor()).max().unwrap_or(0) as usize + 2;
    let (xs, _) = dp2_orbit_checked(&eta, top, ctx)?;
    // ṽ at s = n + 1/2, with v_s = x_{n+1}
    let scaled = |n: i64| {
        let v = Float::with_val(prec, &xs[(n + 1) as usize] * &cube_root);
        if (n + 1) % 2 == 0 {
            v
        } else {
            -v
        }
    };
    let step_sq = Float::with_val(prec, cube_root.square_ref());
    let mut out = Vec::with_capacity(lattice.len());
    for (&t, s) in t_grid.iter().zip(lattice) {
        let (vm, v0, vp) = (scaled(s.floor() - 1), scaled(s.floor()), scaled(s.floor() + 1));
        let mut second = Float::with_val(prec, &vp + &vm);
        second -= Float::with_val(prec, &v0 * 2u32);
        second *= &step_sq;
        let t_s = Float::with_val(prec, s.to_float(ctx) - &two_eta) / &cube_root;
        let mut rhs = Float::with_val(prec, &t_s * &v0);
        rhs += Float::with_val(prec, v0.square_ref()) * &v0 * 2u32;
        let residual = Float::with_val(prec, &second - &rhs).abs();
        out.push(PiiPoint { t, s, t_s, v: v0, second_diff: second, residual });
    }
    Ok(out)
}

/// Deviations of the dPV orbit at `z = z' = N`, `ξ = η²/N²` from its dPII
/// limit over `s = 1/2, ..., 9/2`.
#[derive(Debug, Clone)]
pub struct LimitRow {
    pub n: u64,
    /// `max |ξ^{1/2} α_s - v_{s-1}/v_s|`
    pub alpha_dev: Float,
    /// `max |b_s + z + η v_{s-1} v_s|`
    pub b_dev: Float,
    /// `max |β_{s+1}/β_s - 1/(1 - v_s²)|`
    pub beta_dev: Float,
    /// `max_{k <= 6} |q_k - p_k|`
    pub q_dev: Float,
}

const LIMIT_STEPS: usize = 5;
const LIMIT_KMAX: usize = 6;

pub fn dp5_to_dp2_check(eta: &Float, n_list: &[u64], ctx: &ArithContext) -> Result<Vec<LimitRow>> {
    let prec = ctx.precision_bits();
    let eta = ctx.real(eta);
    let (xs, _) = dp2_orbit_checked(&eta, LIMIT_STEPS + 1, ctx)?;
    let bessel = ToeplitzSymbol::new(&KernelSpec::bessel(eta.clone())?, LIMIT_KMAX, ctx)?;
    let ps = (0..=LIMIT_KMAX).map(|k| bessel.gap(k, ctx)).collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let big_n = ctx.real(n);
        let xi = Float::with_val(prec, eta.square_ref()) / Float::with_val(prec, big_n.square_ref());
        let params = HypParams::new(ctx.complex(n), ctx.complex(n), xi.clone())?;
        let orbit = dp5_orbit(&params, LIMIT_STEPS, ctx)?;
        let root_xi = Float::with_val(prec, xi.sqrt_ref());
        let z = ctx.complex(n);
        let dev = |c: Complex| Float::with_val(prec, c.abs_ref());
        let (mut alpha_dev, mut b_dev, mut beta_dev) = (ctx.zero(), ctx.zero(), ctx.zero());
        for j in 0..LIMIT_STEPS {
            let (v_prev, v) = (&xs[j], &xs[j + 1]);
            let st = &orbit[j];
            let ratio = Float::with_val(prec, v_prev / v);
            let a = Complex::with_val(prec, &st.alpha * &root_xi) - &ratio;
            alpha_dev = alpha_dev.max(&dev(a));
            let prod = Float::with_val(prec, v_prev * v) * &eta;
            let b = Complex::with_val(prec, &st.b + &z) + &prod;
            b_dev = b_dev.max(&dev(b));
            let target = 1u32 / (1u32 - Float::with_val(prec, v.square_ref()));
            let beta = Complex::with_val(prec, &orbit[j + 1].beta / &st.beta) - &target;
            beta_dev = beta_dev.max(&dev(beta));
        }
        let hyp = ToeplitzSymbol::new(&KernelSpec::Hypergeometric(params), LIMIT_KMAX, ctx)?;
        let mut q_dev = ctx.zero();
        for (k, p) in ps.iter().enumerate() {
            let q = hyp.gap(k, ctx)?;
            q_dev = q_dev.max(&Float::with_val(prec, &q - p).abs());
        }
        rows.push(LimitRow { n, alpha_dev, b_dev, beta_dev, q_dev });
    }
    Ok(rows)
}
