use rug::{Complex, Float};

use super::bessel::fd_step;
use super::{HalfInt, HypParams, LatticeKernel, PointCache};
use crate::error::{GapError, Result};
use crate::numerics::{gauss_2f1, gauss_2f1_pfaff, pochhammer_complex, ArithContext};

/// Toeplitz symbol coefficient `t_k` of the hypergeometric model. The
/// Gamma ratio is the Pochhammer product `(-z)_k / k!`, which stays finite
/// at integer `z`. Negative `k` mirrors the formula with `z` and `z'`
/// exchanged.
pub fn hyp_symbol_coeff(k: i64, params: &HypParams, ctx: &ArithContext) -> Result<Complex> {
    let (z, zp) = if k >= 0 { (params.z(), params.zprime()) } else { (params.zprime(), params.z()) };
    let order = k.unsigned_abs();
    let work = ctx.widened(16);
    let prec = work.precision_bits();
    let neg_z = Complex::with_val(prec, -z);
    let neg_zp = Complex::with_val(prec, -zp);
    let mut ratio = pochhammer_complex(&neg_z, order, &work);
    for j in 2..=order {
        ratio /= j;
    }
    if ratio.real().is_zero() && ratio.imag().is_zero() {
        return Ok(ctx.complex(0));
    }
    let xi = work.real(params.xi());
    let scale = Float::with_val(prec, xi.ln_ref()) * (order as f64 / 2.0);
    let a = Complex::with_val(prec, &neg_z + order);
    let c = work.complex(order + 1);
    let f = gauss_2f1(&a, &neg_zp, &c, &work.complex_from_real(&xi), &work)?;
    ctx.check_complex(ctx.complex(ratio * f * scale.exp()), "hyp_symbol_coeff")
}

/// The entries of `m(ζ)` at a real `ζ`. `m12` and `m22` are filled only
/// when requested.
#[derive(Debug, Clone)]
pub struct M2F1Row {
    pub m11: Complex,
    pub m21: Complex,
    pub m12: Option<Complex>,
    pub m22: Option<Complex>,
}

impl M2F1Row {
    /// `m11 m22 - m12 m21`, when all four entries are present.
    pub fn det(&self) -> Option<Complex> {
        let (m12, m22) = (self.m12.as_ref()?, self.m22.as_ref()?);
        let prec = self.m11.prec();
        let mut d = Complex::with_val(prec, &self.m11 * m22);
        d -= Complex::with_val(prec, m12 * &self.m21);
        Some(d)
    }
}

/// `√(z z' ξ) / (1 - ξ)`.
fn prefactor(params: &HypParams, ctx: &ArithContext) -> Complex {
    let xi = ctx.real(params.xi());
    let zzp = ctx.complex(params.z() * params.zprime());
    let root = Complex::with_val(ctx.precision_bits(), zzp * &xi).sqrt();
    root / (1 - xi)
}

/// Evaluates `m(ζ)` with all hypergeometric factors at argument `ξ/(ξ-1)`
/// routed through the Pfaff transformation.
pub fn hyp_m_row(zeta: &Float, params: &HypParams, ctx: &ArithContext, full: bool) -> Result<M2F1Row> {
    let prec = ctx.precision_bits();
    let (z, zp) = (params.z(), params.zprime());
    let xi = ctx.complex_from_real(&ctx.real(params.xi()));
    let pre = prefactor(params, ctx);
    let zeta = ctx.real(zeta);

    let c1 = ctx.complex_from_real(&Float::with_val(prec, &zeta + 0.5));
    let m11 = gauss_2f1_pfaff(&Complex::with_val(prec, -z), &Complex::with_val(prec, -zp), &c1, &xi, ctx)?;
    let c2 = Complex::with_val(prec, &c1 + 1u32);
    let f21 = gauss_2f1_pfaff(&Complex::with_val(prec, 1 - z), &Complex::with_val(prec, 1 - zp), &c2, &xi, ctx)?;
    let m21 = -(Complex::with_val(prec, &pre * &f21) / &c1);

    let (m12, m22) = if full {
        let c3 = ctx.complex_from_real(&Float::with_val(prec, 1.5 - &zeta));
        let f12 = gauss_2f1_pfaff(&Complex::with_val(prec, 1 + z), &Complex::with_val(prec, 1 + zp), &c3, &xi, ctx)?;
        let c4 = Complex::with_val(prec, &c3 - 1u32);
        let m12 = Complex::with_val(prec, &pre * &f12) / &c4;
        let m22 = gauss_2f1_pfaff(z, zp, &c4, &xi, ctx)?;
        (Some(m12), Some(m22))
    } else {
        (None, None)
    };
    Ok(M2F1Row { m11, m21, m12, m22 })
}

/// `h_+(x)` for `x` in the positive half-lattice.
pub fn h_plus(x: HalfInt, params: &HypParams, ctx: &ArithContext) -> Result<Float> {
    let n = x.index().ok_or_else(|| GapError::Domain(format!("h_plus needs a positive half-integer, got {x}")))?;
    let work = ctx.widened(16);
    let prec = work.precision_bits();
    let z1 = Complex::with_val(prec, params.z() + 1u32);
    let zp1 = Complex::with_val(prec, params.zprime() + 1u32);
    let product = pochhammer_complex(&z1, n as u64, &work) * pochhammer_complex(&zp1, n as u64, &work);
    let product = Complex::with_val(prec, product);
    let magnitude = Float::with_val(prec, product.abs_ref());
    let imag_ok = Float::with_val(prec, product.imag().abs_ref()) <= magnitude * work.guard_threshold();
    if !(*product.real() > 0) || !imag_ok {
        return Err(GapError::InvariantViolation(format!("Pochhammer product under h_plus({x}) is not real positive")));
    }
    let xi = work.real(params.xi());
    let ln_xi = Float::with_val(prec, xi.ln_ref());
    let ln_one_minus = Float::with_val(prec, 1 - &xi).ln();
    let re_sum = Float::with_val(prec, params.z().real() + params.zprime().real());
    let mut log = Float::with_val(prec, params.zzp(&work).ln()) / 4u32;
    log += ln_xi * x.to_float(&work) / 2u32;
    log += ln_one_minus * re_sum / 2u32;
    log += Float::with_val(prec, product.real().ln_ref()) / 2u32;
    log -= Float::with_val(prec, Float::factorial(n as u32)).ln();
    ctx.check_real(ctx.real(log.exp()), "h_plus")
}

/// Everything the kernel needs at one lattice point.
#[derive(Debug, Clone)]
pub(crate) struct HypPoint {
    h: Float,
    m11: Complex,
    m21: Complex,
    dm11: Complex,
    dm21: Complex,
}

fn hyp_point(x: HalfInt, params: &HypParams, ctx: &ArithContext) -> Result<HypPoint> {
    let h = h_plus(x, params, ctx)?;
    let zeta = x.to_float(ctx);
    let row = hyp_m_row(&zeta, params, ctx, false)?;
    let (step, work) = fd_step(ctx);
    let wz = work.real(&zeta);
    let up = hyp_m_row(&Float::with_val(work.precision_bits(), &wz + &step), params, &work, false)?;
    let down = hyp_m_row(&Float::with_val(work.precision_bits(), &wz - &step), params, &work, false)?;
    let two_h = step * 2u32;
    let dm11 = ctx.complex((up.m11 - down.m11) / &two_h);
    let dm21 = ctx.complex((up.m21 - down.m21) / &two_h);
    Ok(HypPoint { h, m11: row.m11, m21: row.m21, dm11, dm21 })
}

fn entry_from_points(x: HalfInt, y: HalfInt, px: &HypPoint, py: &HypPoint) -> Float {
    let prec = px.h.prec();
    let cprec = px.m11.prec();
    let core = if x == y {
        let mut d = Complex::with_val(cprec, &px.dm21 * &px.m11);
        d -= Complex::with_val(cprec, &px.dm11 * &px.m21);
        d
    } else {
        let mut d = Complex::with_val(cprec, &px.m21 * &py.m11);
        d -= Complex::with_val(cprec, &px.m11 * &py.m21);
        d / (x - y)
    };
    Float::with_val(prec, &px.h * &py.h) * core.real()
}

/// Entry of the discrete ₂F₁ kernel on the positive quadrant. The imaginary
/// part, which vanishes for valid parameters, is dropped.
pub fn hyp_kernel_entry(x: HalfInt, y: HalfInt, params: &HypParams, ctx: &ArithContext) -> Result<Float> {
    if !x.is_positive() || !y.is_positive() {
        return Err(GapError::Domain(format!("hyp kernel is implemented on positive half-integers only ({x}, {y})")));
    }
    let px = hyp_point(x, params, ctx)?;
    let py = if x == y { px.clone() } else { hyp_point(y, params, ctx)? };
    Ok(entry_from_points(x, y, &px, &py))
}

/// The discrete ₂F₁ kernel as a [`LatticeKernel`], caching per-point data.
#[derive(Debug)]
pub struct HypLattice {
    params: HypParams,
    cache: PointCache<HypPoint>,
}

impl HypLattice {
    pub fn new(params: &HypParams) -> Self {
        Self { params: params.clone(), cache: PointCache::default() }
    }
}

impl LatticeKernel for HypLattice {
    fn block(&self, s: HalfInt, size: usize, ctx: &ArithContext) -> Result<Vec<Float>> {
        if !s.is_positive() {
            return Err(GapError::Domain(format!("hyp kernel block must start in the positive half-lattice, got {s}")));
        }
        let lo = s.floor();
        let points =
            self.cache.range(lo, lo + size as i64 - 1, ctx, |n| hyp_point(HalfInt::new(n), &self.params, ctx))?;
        let rows = crate::par::map((0..size).collect(), |i| {
            (0..size).map(|j| entry_from_points(s + i as i64, s + j as i64, &points[i], &points[j])).collect::<Vec<_>>()
        });
        Ok(rows.into_iter().flatten().collect())
    }

    fn initial_size(&self) -> usize {
        10
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ArithContext {
        ArithContext::new(256).unwrap()
    }

    fn params(z: f64, zp: f64, xi: f64) -> HypParams {
        let ctx = ctx();
        HypParams::new(ctx.complex(z), ctx.complex(zp), ctx.real(xi)).unwrap()
    }

    fn dist(a: &Complex, b: &Complex) -> Float {
        Float::with_val(a.prec().0, Complex::with_val(a.prec(), a - b).abs_ref())
    }

    #[test]
    fn t0_is_plain_hypergeometric() {
        let ctx = ctx();
        let p = params(0.3, 0.7, 0.5);
        let t0 = hyp_symbol_coeff(0, &p, &ctx).unwrap();
        let f = gauss_2f1(&ctx.complex(-0.3), &ctx.complex(-0.7), &ctx.complex(1), &ctx.complex(0.5), &ctx).unwrap();
        assert!(dist(&t0, &f) <= ctx.eps());
    }

    #[test]
    fn integer_z_truncates_symbol() {
        let ctx = ctx();
        let p = params(3.0, 3.0, 0.1);
        for k in 4..8 {
            let t = hyp_symbol_coeff(k, &p, &ctx).unwrap();
            assert!(t.real().is_zero() && t.imag().is_zero());
        }
        assert!(!hyp_symbol_coeff(3, &p, &ctx).unwrap().real().is_zero());
    }

    #[test]
    fn h_plus_at_half() {
        let ctx = ctx();
        // dyadic parameters so that z + z' = 1 exactly
        let p = params(0.25, 0.75, 0.5);
        let h = h_plus(HalfInt::HALF, &p, &ctx).unwrap();
        // h_+(1/2)^2 = (z z' ξ)^{1/2} (1-ξ)^{z+z'}
        let expected = ctx.real(0.25) * ctx.real(0.75) * ctx.real(0.5);
        let expected = expected.sqrt() * ctx.real(0.5);
        let diff = Float::with_val(256, h.square() - expected).abs();
        assert!(diff <= ctx.eps());
    }

    #[test]
    fn h_plus_rejects_negative_points() {
        let p = params(0.3, 0.7, 0.5);
        assert!(matches!(h_plus(HalfInt::new(-1), &p, &ctx()), Err(GapError::Domain(_))));
    }

    #[test]
    fn block_matches_entries() {
        let ctx = ctx();
        let p = params(0.3, 0.7, 0.5);
        let lattice = HypLattice::new(&p);
        let s = HalfInt::new(2);
        let block = lattice.block(s, 3, &ctx).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = hyp_kernel_entry(s + i as i64, s + j as i64, &p, &ctx).unwrap();
                assert_eq!(block[i * 3 + j], e);
            }
        }
    }
}
