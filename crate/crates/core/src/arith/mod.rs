//! Exact and floating-point scalars.

mod rational;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use rational::{ParseQError, Q};
pub use surd::Surd;

/// Ordered field operations shared by the LP objective and margin code.
pub trait Scalar: Clone + fmt::Debug {
    fn zero() -> Self;
    fn from_q(q: &Q) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times_q(&self, k: &Q) -> Self;
    fn signum(&self) -> Ordering;
    fn to_f64(&self) -> f64;

    fn cmp_scalar(&self, other: &Self) -> Ordering {
        self.minus(other).signum()
    }
}

/// A scalar that can also represent square roots of non-negative rationals:
/// either an `f64` or an exact [`Surd`].
pub trait Real: Scalar {
    /// True for exact arithmetic, where verdicts ignore the tolerance.
    const EXACT: bool;

    fn sqrt_q(q: &Q) -> Self;

    /// `value ≥ 0`, up to `tol · scale` for inexact scalars.
    fn nonnegative(value: &Self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            value.signum() != Ordering::Less
        } else {
            value.to_f64() >= -tol * scale
        }
    }
}

impl Scalar for Q {
    fn zero() -> Q {
        Q::zero()
    }
    fn from_q(q: &Q) -> Q {
        q.clone()
    }
    fn plus(&self, other: &Q) -> Q {
        self + other
    }
    fn minus(&self, other: &Q) -> Q {
        self - other
    }
    fn times_q(&self, k: &Q) -> Q {
        self * k
    }
    fn signum(&self) -> Ordering {
        Q::signum(self)
    }
    fn to_f64(&self) -> f64 {
        Q::to_f64(self)
    }
}

impl Scalar for Surd {
    fn zero() -> Surd {
        Surd::zero()
    }
    fn from_q(q: &Q) -> Surd {
        Surd::from_q(q.clone())
    }
    fn plus(&self, other: &Surd) -> Surd {
        self.add(other)
    }
    fn minus(&self, other: &Surd) -> Surd {
        self.sub(other)
    }
    fn times_q(&self, k: &Q) -> Surd {
        self.scale(k)
    }
    fn signum(&self) -> Ordering {
        Surd::signum(self)
    }
    fn to_f64(&self) -> f64 {
        Surd::to_f64(self)
    }
}

impl Real for Surd {
    const EXACT: bool = true;
    fn sqrt_q(q: &Q) -> Surd {
        Surd::sqrt(q)
    }
}

impl Scalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn from_q(q: &Q) -> f64 {
        q.to_f64()
    }
    fn plus(&self, other: &f64) -> f64 {
        self + other
    }
    fn minus(&self, other: &f64) -> f64 {
        self - other
    }
    fn times_q(&self, k: &Q) -> f64 {
        self * k.to_f64()
    }
    fn signum(&self) -> Ordering {
        self.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Real for f64 {
    const EXACT: bool = false;
    fn sqrt_q(q: &Q) -> f64 {
        q.to_f64().max(0.0).sqrt()
    }
}

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CQ {
    pub re: Q,
    pub im: Q,
}

impl CQ {
    pub fn new(re: Q, im: Q) -> CQ {
        CQ { re, im }
    }

    pub fn real(re: Q) -> CQ {
        CQ { re, im: Q::zero() }
    }

    pub fn from_i64(re: i64, im: i64) -> CQ {
        CQ { re: Q::from_i64(re), im: Q::from_i64(im) }
    }

    pub fn zero() -> CQ {
        CQ::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> CQ {
        CQ { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Q) -> CQ {
        CQ { re: &self.re * k, im: &self.im * k }
    }
}

impl Add for &CQ {
    type Output = CQ;
    fn add(self, o: &CQ) -> CQ {
        CQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &CQ {
    type Output = CQ;
    fn sub(self, o: &CQ) -> CQ {
        CQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &CQ {
    type Output = CQ;
    fn mul(self, o: &CQ) -> CQ {
        CQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &CQ {
    type Output = CQ;
    fn neg(self) -> CQ {
        CQ { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for CQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "-" } else { "+" }, self.im.abs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_products() {
        let a = CQ::from_i64(1, 2);
        let b = CQ::from_i64(3, -1);
        assert_eq!(&a * &b, CQ::from_i64(5, 5));
        assert_eq!((&a * &a.conj()).re, a.norm_sqr());
    }

    #[test]
    fn float_verdict_uses_scaled_tolerance() {
        assert!(f64::nonnegative(&-1e-10, 1.0, 1e-9));
        assert!(!f64::nonnegative(&-1e-8, 1.0, 1e-9));
        assert!(f64::nonnegative(&-1e-8, 100.0, 1e-9));
        assert!(!Surd::nonnegative(&Surd::from_q(Q::new(-1, 1 << 50)), 1.0, 1.0));
    }
}
