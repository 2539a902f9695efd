use rug::{Complex, Float};

use super::linalg::lu_det;
use crate::error::{GapError, Result};
use crate::kernels::{bessel_symbol_coeff, hyp_symbol_coeff, KernelSpec};
use crate::numerics::ArithContext;
use crate::par;

#[derive(Debug, Clone)]
enum Coeffs {
    /// `c_m` for `m >= 0`; the symbol is even.
    RealEven(Vec<Float>),
    /// `c_m` for `m = -(len-1) ..= len-1`, stored at offset `len-1`.
    Real(Vec<Float>),
    Complex(Vec<Complex>),
}

/// Fourier coefficients of a model's symbol up to some order, together with
/// the determinant prefactor. Building this once lets a whole table of
/// Toeplitz determinants share the special-function work.
#[derive(Debug, Clone)]
pub struct ToeplitzSymbol {
    prefactor: Float,
    coeffs: Coeffs,
    max_k: usize,
    work: ArithContext,
}

/// Extra bits carried through the elimination.
const LU_GUARD_BITS: u32 = 32;

impl ToeplitzSymbol {
    /// Symbol data sufficient for every `k <= max_k`.
    pub fn new(spec: &KernelSpec, max_k: usize, ctx: &ArithContext) -> Result<Self> {
        let work = ctx.widened(LU_GUARD_BITS);
        let span = max_k.max(1) as i64;
        match spec {
            KernelSpec::Bessel { eta } => {
                let eta_w = work.real(eta);
                let coeffs = par::try_map((0..span).collect(), |m| bessel_symbol_coeff(m, &eta_w, &work))?;
                let prefactor = (-Float::with_val(work.precision_bits(), eta_w.square_ref())).exp();
                Ok(Self { prefactor, coeffs: Coeffs::RealEven(coeffs), max_k, work })
            }
            KernelSpec::Hypergeometric(p) => {
                let coeffs = par::try_map((-(span - 1)..span).collect(), |m| hyp_symbol_coeff(m, p, &work))?;
                let xi = work.real(p.xi());
                let prefactor = (Float::with_val(work.precision_bits(), 1 - &xi).ln() * p.zzp(&work)).exp();
                let coeffs = if p.is_real_pair() {
                    Coeffs::Real(coeffs.into_iter().map(|c| c.real().clone()).collect())
                } else {
                    Coeffs::Complex(coeffs)
                };
                Ok(Self { prefactor, coeffs, max_k, work })
            }
        }
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    /// Prefactor times the `k × k` Toeplitz determinant (1 when `k = 0`).
    pub fn gap(&self, k: usize, ctx: &ArithContext) -> Result<Float> {
        if k > self.max_k {
            return Err(GapError::InvalidParameter(format!(
                "symbol prepared up to k={} but k={k} requested",
                self.max_k
            )));
        }
        let prec = self.work.precision_bits();
        let det = match &self.coeffs {
            Coeffs::RealEven(c) => {
                let a = (0..k * k).map(|idx| c[(idx / k).abs_diff(idx % k)].clone()).collect();
                Float::with_val(prec, lu_det(a, k))
            }
            Coeffs::Real(c) => {
                let mid = (c.len() - 1) / 2;
                let a = (0..k * k).map(|idx| c[mid + idx / k - idx % k].clone()).collect();
                Float::with_val(prec, lu_det(a, k))
            }
            Coeffs::Complex(c) => {
                let mid = (c.len() - 1) / 2;
                let a = (0..k * k).map(|idx| c[mid + idx / k - idx % k].clone()).collect();
                let d = Complex::with_val(prec, lu_det(a, k));
                let value = Complex::with_val(prec, &d * &self.prefactor);
                let imag = Float::with_val(prec, value.imag().abs_ref());
                if imag > ctx.guard_threshold() {
                    return Err(GapError::PrecisionInsufficient(format!(
                        "Toeplitz determinant at k={k} kept an imaginary part {:e}",
                        imag.to_f64()
                    )));
                }
                return ctx.check_real(ctx.real(value.real()), "toeplitz_gap");
            }
        };
        ctx.check_real(ctx.real(det * &self.prefactor), "toeplitz_gap")
    }
}

/// `D_{k+1/2}` from the `k × k` Toeplitz determinant of the model symbol.
pub fn toeplitz_gap(spec: &KernelSpec, k: usize, ctx: &ArithContext) -> Result<Float> {
    ToeplitzSymbol::new(spec, k, ctx)?.gap(k, ctx)
}

/// Precision below which the Bessel Toeplitz route is flagged as risky:
/// `2ηk/ln 2 + 128` bits.
pub fn toeplitz_precision_hint(eta: f64, k: usize) -> u32 {
    (2.0 * eta * k as f64 / std::f64::consts::LN_2 + 128.0).ceil() as u32
}
