use std::fmt;

use crate::linalg::Rational;

/// Number type carried by Push-Sum: exact rationals or binary doubles.
pub trait Mass: Clone + PartialEq + PartialOrd + fmt::Debug {
    fn zero() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul_usize(&self, k: usize) -> Self;
    fn div_usize(&self, d: usize) -> Self;
    /// `self / other`, or `None` when `other` is zero.
    fn ratio(&self, other: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// The exact value, when the representation is exact.
    fn exact(&self) -> Option<Rational>;

    fn one() -> Self {
        Self::from_rational(&Rational::one())
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Mass for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul_usize(&self, k: usize) -> Self {
        self * &Rational::from(k)
    }

    fn div_usize(&self, d: usize) -> Self {
        self / &Rational::from(d)
    }

    fn ratio(&self, other: &Self) -> Option<Self> {
        self.checked_div(other).ok()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn exact(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul_usize(&self, k: usize) -> Self {
        self * k as f64
    }

    fn div_usize(&self, d: usize) -> Self {
        self / d as f64
    }

    fn ratio(&self, other: &Self) -> Option<Self> {
        (*other != 0.0).then(|| self / other)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn exact(&self) -> Option<Rational> {
        None
    }
}
