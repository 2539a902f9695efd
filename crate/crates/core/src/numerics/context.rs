use rug::{Complex, Float};

use crate::error::{GapError, Result};

/// Guard bits subtracted from the working precision when forming `eps`.
pub const DEFAULT_GUARD_BITS: u32 = 32;

/// Smallest precision a context may be created with.
pub const MIN_PRECISION_BITS: u32 = 64;

/// Precision-controlled arithmetic environment.
///
/// Every value produced by the library carries `precision_bits` of mantissa.
/// `eps` is the comparison tolerance: `2^(-precision_bits + guard)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithContext {
    precision_bits: u32,
    guard: u32,
}

impl ArithContext {
    pub fn new(precision_bits: u32) -> Result<Self> {
        Self::with_guard(precision_bits, DEFAULT_GUARD_BITS)
    }

    pub fn with_guard(precision_bits: u32, guard: u32) -> Result<Self> {
        if precision_bits < MIN_PRECISION_BITS {
            return Err(GapError::InvalidPrecision(precision_bits));
        }
        if guard >= precision_bits {
            return Err(GapError::InvalidParameter(format!(
                "guard bits {guard} must be below precision {precision_bits}"
            )));
        }
        Ok(Self { precision_bits, guard })
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard
    }

    /// `2^(-precision_bits + guard)`, exactly.
    pub fn eps(&self) -> Float {
        let exp = self.guard as i32 - self.precision_bits as i32;
        Float::with_val(self.precision_bits, Float::i_exp(1, exp))
    }

    /// `2^(-precision_bits)`: the stopping threshold for series summation.
    pub fn unit_roundoff(&self) -> Float {
        Float::with_val(self.precision_bits, Float::i_exp(1, -(self.precision_bits as i32)))
    }

    /// Tolerance used by all genericity guards: `10^6 * eps`.
    pub fn guard_threshold(&self) -> Float {
        self.eps() * 1_000_000u32
    }

    /// A context with `extra` more bits, same guard.
    pub fn widened(&self, extra: u32) -> Self {
        Self { precision_bits: self.precision_bits + extra, guard: self.guard }
    }

    /// Same guard at an explicit precision (never below the minimum).
    pub fn with_precision(&self, precision_bits: u32) -> Self {
        Self { precision_bits: precision_bits.max(MIN_PRECISION_BITS), guard: self.guard }
    }

    /// The context used by validation re-runs.
    pub fn doubled(&self) -> Self {
        Self { precision_bits: self.precision_bits * 2, guard: self.guard }
    }

    pub fn real<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.precision_bits, value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.precision_bits)
    }

    pub fn one(&self) -> Float {
        self.real(1)
    }

    pub fn pi(&self) -> Float {
        self.real(rug::float::Constant::Pi)
    }

    pub fn complex<T>(&self, value: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.precision_bits, value)
    }

    pub fn complex_from_real(&self, re: &Float) -> Complex {
        Complex::with_val(self.precision_bits, (re, 0))
    }

    /// Parses a decimal string at context precision.
    pub fn parse_real(&self, text: &str) -> Result<Float> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| GapError::InvalidParameter(format!("cannot parse `{text}` as a real: {e}")))?;
        let value = self.real(parsed);
        self.check_real(value, "parse_real")
    }

    /// Parses `a`, `a+bi`, `a-bi`, `bi` forms.
    pub fn parse_complex(&self, text: &str) -> Result<Complex> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not part of an exponent and not leading
            let bytes = body.as_bytes();
            let mut split = None;
            for idx in (1..bytes.len()).rev() {
                let ch = bytes[idx] as char;
                if (ch == '+' || ch == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                    split = Some(idx);
                    break;
                }
            }
            let (re, im) = match split {
                Some(idx) => (&body[..idx], &body[idx..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let re = self.parse_real(re)?;
            let im = self.parse_real(im.trim_start_matches('+'))?;
            Ok(self.complex((re, im)))
        } else {
            let re = self.parse_real(&t)?;
            Ok(self.complex_from_real(&re))
        }
    }

    pub fn check_real(&self, value: Float, what: &'static str) -> Result<Float> {
        if value.is_finite() {
            Ok(value)
        } else {
            Err(GapError::NonFinite(what))
        }
    }

    pub fn check_complex(&self, value: Complex, what: &'static str) -> Result<Complex> {
        if value.real().is_finite() && value.imag().is_finite() {
            Ok(value)
        } else {
            Err(GapError::NonFinite(what))
        }
    }

    /// Number of significant decimal digits that round-trip a value at this precision.
    pub fn decimal_digits(&self) -> usize {
        (self.precision_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }
}
