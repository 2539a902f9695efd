use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use rug::Float;

use crate::error::GapError;
use crate::numerics::ArithContext;

/// A point `n + 1/2` of the half-integer lattice, stored exactly as `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    n: i64,
}

impl HalfInt {
    pub const HALF: HalfInt = HalfInt { n: 0 };

    /// The point `n + 1/2`.
    pub const fn new(n: i64) -> Self {
        Self { n }
    }

    /// The lattice point `k + 1/2` matching the table index `k`.
    pub const fn from_index(k: usize) -> Self {
        Self { n: k as i64 }
    }

    /// The integer part `n` (so `self = n + 1/2`).
    pub const fn floor(self) -> i64 {
        self.n
    }

    /// `self - 1/2`, the table index; `None` for points below `1/2`.
    pub fn index(self) -> Option<usize> {
        usize::try_from(self.n).ok()
    }

    /// `self + 1/2`.
    pub const fn ceil(self) -> i64 {
        self.n + 1
    }

    pub const fn is_positive(self) -> bool {
        self.n >= 0
    }

    /// Twice the value, an odd integer.
    pub const fn doubled(self) -> i64 {
        2 * self.n + 1
    }

    pub fn to_float(self, ctx: &ArithContext) -> Float {
        ctx.real(self.doubled()) / 2u32
    }

    pub fn to_f64(self) -> f64 {
        self.n as f64 + 0.5
    }
}

impl Add<i64> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i64) -> HalfInt {
        HalfInt { n: self.n + rhs }
    }
}

impl Sub<i64> for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: i64) -> HalfInt {
        HalfInt { n: self.n - rhs }
    }
}

impl Sub<HalfInt> for HalfInt {
    type Output = i64;
    fn sub(self, rhs: HalfInt) -> i64 {
        self.n - rhs.n
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.doubled())
    }
}

impl FromStr for HalfInt {
    type Err = GapError;

    /// Accepts `7/2` or `3.5`.
    fn from_str(text: &str) -> Result<Self, GapError> {
        let bad = || GapError::InvalidParameter(format!("`{text}` is not a half-integer"));
        let t = text.trim();
        let doubled: i64 = if let Some((num, den)) = t.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            num.trim().parse().map_err(|_| bad())?
        } else {
            let v: f64 = t.parse().map_err(|_| bad())?;
            let d = v * 2.0;
            if d.fract() != 0.0 {
                return Err(bad());
            }
            d as i64
        };
        if doubled.rem_euclid(2) != 1 {
            return Err(bad());
        }
        Ok(HalfInt { n: (doubled - 1) / 2 })
    }
}
