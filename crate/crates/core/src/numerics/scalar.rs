use rug::{Complex, Float};

/// Field operations shared by real and complex multiprecision values, so that
/// dense linear algebra can be written once.
pub trait Scalar: Clone + Send + Sync + std::fmt::Debug {
    fn zero(prec: u32) -> Self;
    fn one(prec: u32) -> Self;
    fn from_real(x: &Float) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);

    /// Modulus as a real.
    fn modulus(&self) -> Float;
    fn real_part(&self) -> Float;
    fn imag_part(&self) -> Float;
    fn is_finite(&self) -> bool;
    fn precision(&self) -> u32;
}

impl Scalar for Float {
    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }
    fn one(prec: u32) -> Self {
        Float::with_val(prec, 1)
    }
    fn from_real(x: &Float) -> Self {
        x.clone()
    }
    fn add(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self * other)
    }
    fn div(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self / other)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn modulus(&self) -> Float {
        Float::with_val(self.prec(), self.abs_ref())
    }
    fn real_part(&self) -> Float {
        self.clone()
    }
    fn imag_part(&self) -> Float {
        Float::new(self.prec())
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(self)
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

impl Scalar for Complex {
    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }
    fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1)
    }
    fn from_real(x: &Float) -> Self {
        Complex::with_val(x.prec(), (x, 0))
    }
    fn add(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self * other)
    }
    fn div(&self, other: &Self) -> Self {
        Complex::with_val(self.prec(), self / other)
    }
    fn neg(&self) -> Self {
        Complex::with_val(self.prec(), -self)
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn modulus(&self) -> Float {
        Float::with_val(self.prec().0, self.abs_ref())
    }
    fn real_part(&self) -> Float {
        self.real().clone()
    }
    fn imag_part(&self) -> Float {
        self.imag().clone()
    }
    fn is_finite(&self) -> bool {
        self.real().is_finite() && self.imag().is_finite()
    }
    fn precision(&self) -> u32 {
        self.prec().0
    }
}
