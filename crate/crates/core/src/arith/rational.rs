use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::Sign;
use num::traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub};
use num::{BigInt, BigRational, One, Rational64, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number.
///
/// Values whose numerator and denominator fit comfortably in an `i64` are
/// kept inline; anything larger is promoted to a `BigRational`. The split is
/// invisible to callers: equality, ordering and formatting only look at the
/// value.
#[derive(Clone)]
pub struct Q(Repr);

#[derive(Clone)]
enum Repr {
    Small(Rational64),
    Big(BigRational),
}

// Leaves headroom so negation and `abs` on the small path never overflow.
const SMALL_LIMIT: i64 = 1 << 62;

fn fits(n: &BigInt) -> Option<i64> {
    n.to_i64().filter(|v| v.abs() < SMALL_LIMIT)
}

impl Q {
    pub fn zero() -> Q {
        Q(Repr::Small(Rational64::zero()))
    }

    pub fn one() -> Q {
        Q::from_i64(1)
    }

    pub fn from_i64(n: i64) -> Q {
        if n.abs() < SMALL_LIMIT {
            Q(Repr::Small(Rational64::from_integer(n)))
        } else {
            Q::from_big(BigRational::from_integer(BigInt::from(n)))
        }
    }

    /// `n / d`; panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Q {
        assert!(!d.is_zero(), "zero denominator");
        Q::from_big(BigRational::new(n, d))
    }

    pub fn from_big(r: BigRational) -> Q {
        match (fits(r.numer()), fits(r.denom())) {
            (Some(n), Some(d)) => Q(Repr::Small(Rational64::new_raw(n, d))),
            _ => Q(Repr::Big(r)),
        }
    }

    /// Exact value of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Q> {
        BigRational::from_float(x).map(Q::from_big)
    }

    fn from_small(r: Rational64) -> Q {
        if r.numer().abs() < SMALL_LIMIT && r.denom().abs() < SMALL_LIMIT {
            Q(Repr::Small(r))
        } else {
            Q::from_big(BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> Ordering {
        let s = match &self.0 {
            Repr::Small(r) => r.numer().signum(),
            Repr::Big(r) => match r.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        };
        s.cmp(&0)
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(r) => Q::from_small(r.recip()),
            Repr::Big(r) => Q::from_big(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn min(self, other: Q) -> Q {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Q) -> Q {
        if other > self {
            other
        } else {
            self
        }
    }

    /// The exact square root, when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Q> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        (&rn * &rn == n && &rd * &rd == d).then(|| Q::from_bigints(rn, rd))
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        let n = self.numer();
        let d = self.denom();
        num::Integer::div_floor(&n, &d)
    }

    pub fn pow(&self, k: u32) -> Q {
        (0..k).fold(Q::one(), |acc, _| &acc * self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $big:tt) => {
        impl $trait<&Q> for &Q {
            type Output = Q;
            fn $method(self, rhs: &Q) -> Q {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Q::from_small(r);
                    }
                }
                Q::from_big(self.to_big() $big rhs.to_big())
            }
        }
        impl $trait<Q> for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Q> for Q {
            type Output = Q;
            fn $method(self, rhs: &Q) -> Q {
                (&self).$method(rhs)
            }
        }
        impl $trait<Q> for &Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl Div<&Q> for &Q {
    type Output = Q;
    fn div(self, rhs: &Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Q::from_small(r);
            }
        }
        Q::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Q> for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        &self / &rhs
    }
}

impl Div<&Q> for Q {
    type Output = Q;
    fn div(self, rhs: &Q) -> Q {
        &self / rhs
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match &self.0 {
            Repr::Small(r) => Q(Repr::Small(-r)),
            Repr::Big(r) => Q::from_big(-r),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Q {}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Q {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::from_i64(n)
    }
}

impl From<BigInt> for Q {
    fn from(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }
}

impl Default for Q {
    fn default() -> Q {
        Q::zero()
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;

    /// Accepts `p`, `p/q` and plain decimals such as `-1.25` (read exactly).
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let err = || ParseQError(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Q::from_bigints(n, d));
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let digits = format!("{int_digits}{frac}");
            let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
            if negative {
                n = -n;
            }
            let d = num::pow(BigInt::from(10), frac.len());
            return Ok(Q::from_bigints(n, d));
        }
        let n: BigInt = t.parse().map_err(|_| err())?;
        Ok(Q::from(n))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Q, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl num::Zero for Q {
    fn zero() -> Q {
        Q::zero()
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Q {
        Q::one()
    }
}

impl std::iter::Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Q> for Q {
    fn sum<I: Iterator<Item = &'a Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |acc, x| acc + x)
    }
}
