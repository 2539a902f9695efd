use rug::Float;

use super::{HalfInt, LatticeKernel, PointCache};
use crate::error::Result;
use crate::numerics::{bessel_i, bessel_j, ArithContext};
use crate::par;

/// Toeplitz symbol coefficient `f_m = I_m(2η)` of `exp(η(ζ + 1/ζ))`.
pub fn bessel_symbol_coeff(m: i64, eta: &Float, ctx: &ArithContext) -> Result<Float> {
    let u = Float::with_val(ctx.precision_bits(), eta * 2u32);
    bessel_i(m, &u, ctx)
}

/// Finite-difference step in the order: `2^{-prec/3}`.
pub(crate) fn fd_step(ctx: &ArithContext) -> (Float, ArithContext) {
    let third = ctx.precision_bits() / 3;
    let work = ctx.widened(third + 32);
    (work.real(Float::i_exp(1, -(third as i32))), work)
}

/// `J_n(2η)` and `∂J_ν(2η)/∂ν` at `ν = n`.
#[derive(Debug, Clone)]
pub(crate) struct BesselPoint {
    value: Float,
    order_derivative: Float,
}

fn bessel_point(n: i64, eta: &Float, ctx: &ArithContext) -> Result<BesselPoint> {
    let (h, work) = fd_step(ctx);
    let u = work.real(eta) * 2u32;
    let nu = work.real(n);
    let value = bessel_j(&nu, &u, &work)?;
    let up = bessel_j(&Float::with_val(work.precision_bits(), &nu + &h), &u, &work)?;
    let down = bessel_j(&Float::with_val(work.precision_bits(), &nu - &h), &u, &work)?;
    let derivative = (up - down) / (h * 2u32);
    Ok(BesselPoint { value: ctx.real(value), order_derivative: ctx.real(derivative) })
}

fn entry_from_points(eta: &Float, x: HalfInt, y: HalfInt, px: [&BesselPoint; 2], py: [&BesselPoint; 2]) -> Float {
    let prec = eta.prec();
    if x == y {
        let mut d = Float::with_val(prec, &px[0].order_derivative * &px[1].value);
        d -= &px[0].value * &px[1].order_derivative;
        return d * eta;
    }
    let mut num = Float::with_val(prec, &px[0].value * &py[1].value);
    num -= &py[0].value * &px[1].value;
    num * eta / (x - y)
}

/// Entry of the discrete Bessel kernel at `(x, y)`; the diagonal uses a
/// central difference in the Bessel order.
pub fn bessel_kernel_entry(x: HalfInt, y: HalfInt, eta: &Float, ctx: &ArithContext) -> Result<Float> {
    let eta = ctx.real(eta);
    let px = [bessel_point(x.floor(), &eta, ctx)?, bessel_point(x.ceil(), &eta, ctx)?];
    let py = [bessel_point(y.floor(), &eta, ctx)?, bessel_point(y.ceil(), &eta, ctx)?];
    Ok(entry_from_points(&eta, x, y, [&px[0], &px[1]], [&py[0], &py[1]]))
}

/// The discrete Bessel kernel as a [`LatticeKernel`], caching Bessel values
/// per order.
#[derive(Debug)]
pub struct BesselLattice {
    eta: Float,
    cache: PointCache<BesselPoint>,
}

impl BesselLattice {
    pub fn new(eta: &Float) -> Self {
        Self { eta: eta.clone(), cache: PointCache::default() }
    }
}

impl LatticeKernel for BesselLattice {
    fn block(&self, s: HalfInt, size: usize, ctx: &ArithContext) -> Result<Vec<Float>> {
        let eta = ctx.real(&self.eta);
        let lo = s.floor();
        let points = self.cache.range(lo, lo + size as i64, ctx, |n| bessel_point(n, &eta, ctx))?;
        let rows = par::map((0..size).collect(), |i| {
            (0..size)
                .map(|j| {
                    entry_from_points(
                        &eta,
                        s + i as i64,
                        s + j as i64,
                        [&points[i], &points[i + 1]],
                        [&points[j], &points[j + 1]],
                    )
                })
                .collect::<Vec<_>>()
        });
        Ok(rows.into_iter().flatten().collect())
    }

    fn initial_size(&self) -> usize {
        (2.0 * std::f64::consts::E * self.eta.to_f64()).ceil() as usize + 10
    }
}
