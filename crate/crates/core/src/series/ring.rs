use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::Polynomial;
use crate::ratlinalg::Rational;

/// Coefficient ring for [`NestedSeries`](super::NestedSeries).
///
/// Instances: exact rationals, polynomials in `t` with rational
/// coefficients, and complex floats.
pub trait CoefficientRing: Clone + Debug + PartialEq + Send + Sync {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = CoefficientRing::add(self, other);
    }

    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
}

impl CoefficientRing for Rational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl CoefficientRing for Polynomial {
    fn ring_zero() -> Self {
        Polynomial::zero()
    }
    fn ring_one() -> Self {
        Polynomial::one()
    }
    fn is_ring_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Polynomial::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Polynomial::mul(self, other)
    }
    fn scale(&self, q: &Rational) -> Self {
        Polynomial::scale(self, q)
    }
    fn from_rational(q: &Rational) -> Self {
        Polynomial::constant(q.clone())
    }
    fn add_assign(&mut self, other: &Self) {
        Polynomial::add_assign(self, other);
    }
}

impl CoefficientRing for Complex64 {
    fn ring_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn ring_one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_ring_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Rational) -> Self {
        self * rational_to_f64(q)
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
