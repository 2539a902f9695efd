use std::fmt;

use rug::{Complex, Float};

use crate::error::{GapError, Result};
use crate::numerics::ArithContext;

/// Parameters `(z, z', ξ)` of the hypergeometric model. Construct through
/// [`HypParams::new`], which enforces the positivity condition
/// `(z+k)(z'+k) > 0` for every integer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypParams {
    z: Complex,
    zprime: Complex,
    xi: Float,
}

/// Which branch of the positivity condition a parameter pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `z' = conj(z)` with nonzero imaginary part.
    Conjugate,
    /// Two reals strictly inside the same unit interval (possibly equal).
    SameInterval,
    /// Two positive integers: the Meixner degeneration, where the
    /// weights still stay nonnegative on partitions.
    PositiveIntegers,
}

impl HypParams {
    pub fn new(z: Complex, zprime: Complex, xi: Float) -> Result<Self> {
        if !(xi > 0 && xi < 1) {
            return Err(GapError::InvalidParameter(format!("xi must lie in (0,1), got {}", xi.to_f64())));
        }
        let params = Self { z, zprime, xi };
        params.kind()?;
        Ok(params)
    }

    pub fn kind(&self) -> Result<PairKind> {
        let (z, zp) = (&self.z, &self.zprime);
        let finite = [z.real(), z.imag(), zp.real(), zp.imag()].iter().all(|v| v.is_finite());
        if !finite {
            return Err(GapError::InvalidParameter("z and z' must be finite".into()));
        }
        if !z.imag().is_zero() || !zp.imag().is_zero() {
            let conj = z.real() == zp.real() && *z.imag() == -zp.imag().clone();
            return if conj {
                Ok(PairKind::Conjugate)
            } else {
                Err(GapError::InvalidParameter(format!(
                    "complex z={} requires z'=conj(z), got z'={}",
                    z.to_string_radix(10, Some(12)),
                    zp.to_string_radix(10, Some(12))
                )))
            };
        }
        let (a, b) = (z.real(), zp.real());
        if a.is_integer() || b.is_integer() {
            if a.is_integer() && b.is_integer() && *a > 0 && *b > 0 {
                return Ok(PairKind::PositiveIntegers);
            }
            return Err(GapError::InvalidParameter(format!(
                "real z={} z'={}: integers are accepted only as a pair of positive integers",
                a.to_f64(),
                b.to_f64()
            )));
        }
        let fa = Float::with_val(a.prec(), a.floor_ref());
        let fb = Float::with_val(b.prec(), b.floor_ref());
        if fa == fb {
            Ok(PairKind::SameInterval)
        } else {
            Err(GapError::InvalidParameter(format!(
                "real z={} z'={} must lie between the same pair of consecutive integers",
                a.to_f64(),
                b.to_f64()
            )))
        }
    }

    pub fn z(&self) -> &Complex {
        &self.z
    }

    pub fn zprime(&self) -> &Complex {
        &self.zprime
    }

    pub fn xi(&self) -> &Float {
        &self.xi
    }

    /// `z z'` as a real number (positive for every valid pair).
    pub fn zzp(&self, ctx: &ArithContext) -> Float {
        let prod = ctx.complex(&self.z * &self.zprime);
        prod.real().clone()
    }

    /// Whether both parameters are real.
    pub fn is_real_pair(&self) -> bool {
        self.z.imag().is_zero() && self.zprime.imag().is_zero()
    }

    /// The same parameters with `z` and `z'` exchanged.
    pub fn swapped(&self) -> Self {
        Self { z: self.zprime.clone(), zprime: self.z.clone(), xi: self.xi.clone() }
    }
}

impl fmt::Display for HypParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z={} z'={} xi={}",
            fmt_complex(&self.z),
            fmt_complex(&self.zprime),
            self.xi.to_string_radix(10, Some(17))
        )
    }
}

fn fmt_complex(c: &Complex) -> String {
    let re = c.real().to_string_radix(10, Some(17));
    if c.imag().is_zero() {
        re
    } else {
        let im = c.imag().to_string_radix(10, Some(17));
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

/// Which model every downstream operation evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Discrete Bessel kernel with parameter `η > 0`.
    Bessel { eta: Float },
    /// Discrete ₂F₁ kernel.
    Hypergeometric(HypParams),
}

impl KernelSpec {
    pub fn bessel(eta: Float) -> Result<Self> {
        if !(eta.is_finite() && eta > 0) {
            return Err(GapError::InvalidParameter(format!("eta must be positive, got {}", eta.to_f64())));
        }
        Ok(Self::Bessel { eta })
    }

    pub fn hypergeometric(z: Complex, zprime: Complex, xi: Float) -> Result<Self> {
        Ok(Self::Hypergeometric(HypParams::new(z, zprime, xi)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bessel { .. } => "bessel",
            Self::Hypergeometric(_) => "hyp",
        }
    }

    pub fn as_hyp(&self) -> Option<&HypParams> {
        match self {
            Self::Hypergeometric(p) => Some(p),
            Self::Bessel { .. } => None,
        }
    }

    pub fn eta(&self) -> Option<&Float> {
        match self {
            Self::Bessel { eta } => Some(eta),
            Self::Hypergeometric(_) => None,
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bessel { eta } => write!(f, "bessel eta={}", eta.to_string_radix(10, Some(17))),
            Self::Hypergeometric(p) => write!(f, "hyp {p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ArithContext {
        ArithContext::new(128).unwrap()
    }

    fn hyp(z: (f64, f64), zp: (f64, f64), xi: f64) -> Result<HypParams> {
        let ctx = ctx();
        HypParams::new(ctx.complex(z), ctx.complex(zp), ctx.real(xi))
    }

    #[test]
    fn accepts_valid_branches() {
        assert_eq!(hyp((0.3, 0.0), (0.7, 0.0), 0.5).unwrap().kind().unwrap(), PairKind::SameInterval);
        assert_eq!(hyp((2.5, 0.0), (2.5, 0.0), 0.85).unwrap().kind().unwrap(), PairKind::SameInterval);
        assert_eq!(hyp((-1.5, 0.0), (-1.2, 0.0), 0.5).unwrap().kind().unwrap(), PairKind::SameInterval);
        assert_eq!(hyp((1.5, 0.5), (1.5, -0.5), 0.4).unwrap().kind().unwrap(), PairKind::Conjugate);
        assert_eq!(hyp((10.0, 0.0), (20.0, 0.0), 0.01).unwrap().kind().unwrap(), PairKind::PositiveIntegers);
    }

    #[test]
    fn rejects_invalid() {
        assert!(hyp((0.3, 0.0), (1.7, 0.0), 0.5).is_err());
        assert!(hyp((1.5, 0.5), (1.5, 0.5), 0.5).is_err());
        assert!(hyp((0.3, 0.0), (0.7, 0.0), 1.2).is_err());
        assert!(hyp((0.3, 0.0), (0.7, 0.0), 0.0).is_err());
        assert!(hyp((0.0, 0.0), (0.0, 0.0), 0.5).is_err());
        assert!(hyp((-2.0, 0.0), (-2.0, 0.0), 0.5).is_err());
        assert!(KernelSpec::bessel(ctx().real(0)).is_err());
        assert!(KernelSpec::bessel(ctx().real(-1)).is_err());
    }

    #[test]
    fn positive_product() {
        let ctx = ctx();
        for p in
            [hyp((0.3, 0.0), (0.7, 0.0), 0.5), hyp((1.5, 0.5), (1.5, -0.5), 0.4), hyp((-1.5, 0.0), (-1.2, 0.0), 0.5)]
        {
            assert!(p.unwrap().zzp(&ctx) > 0);
        }
    }
}
