use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use super::Q;

/// Exact real of the form `q + Σ c_k √n_k` with rational `q`, `c_k` and
/// integer radicands `n_k > 1` that are not perfect squares.
///
/// Sums of square roots of rationals are closed under addition and rational
/// scaling, which is all the margin and LP objective computations need.
#[derive(Clone, PartialEq, Eq)]
pub struct Surd {
    rational: Q,
    // Sorted by radicand, no zero coefficients.
    radicals: Vec<(BigInt, Q)>,
}

const SMALL_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

impl Surd {
    pub fn zero() -> Surd {
        Surd { rational: Q::zero(), radicals: Vec::new() }
    }

    pub fn from_q(q: Q) -> Surd {
        Surd { rational: q, radicals: Vec::new() }
    }

    /// `√q` for `q ≥ 0`; panics on negative input.
    pub fn sqrt(q: &Q) -> Surd {
        assert!(!q.is_negative(), "square root of a negative rational");
        if let Some(r) = q.sqrt_exact() {
            return Surd::from_q(r);
        }
        // √(n/d) = √(n·d) / d
        let d = q.denom();
        let mut radicand = q.numer() * &d;
        let mut outside = BigInt::one();
        for p in SMALL_PRIMES {
            let p2 = BigInt::from(p * p);
            while (&radicand % &p2).is_zero() {
                radicand /= &p2;
                outside *= p;
            }
        }
        let root = radicand.sqrt();
        if &root * &root == radicand {
            return Surd::from_q(Q::from_bigints(outside * root, d));
        }
        Surd { rational: Q::zero(), radicals: vec![(radicand, Q::from_bigints(outside, d))] }
    }

    pub fn rational_part(&self) -> &Q {
        &self.rational
    }

    /// The value as a rational, when no radical survives.
    pub fn as_rational(&self) -> Option<&Q> {
        self.radicals.is_empty().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn add(&self, other: &Surd) -> Surd {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.combine(other, true)
    }

    fn combine(&self, other: &Surd, negate: bool) -> Surd {
        let rational = if negate { &self.rational - &other.rational } else { &self.rational + &other.rational };
        if other.radicals.is_empty() {
            return Surd { rational, radicals: self.radicals.clone() };
        }
        let mut radicals = Vec::with_capacity(self.radicals.len() + other.radicals.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.radicals, &other.radicals);
        let sign = |c: &Q| if negate { -c } else { c.clone() };
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    radicals.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    radicals.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &sign(&b[j].1);
                    if !c.is_zero() {
                        radicals.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Surd { rational, radicals }
    }

    pub fn neg(&self) -> Surd {
        self.scale(&Q::from_i64(-1))
    }

    pub fn scale(&self, k: &Q) -> Surd {
        if k.is_zero() {
            return Surd::zero();
        }
        Surd { rational: &self.rational * k, radicals: self.radicals.iter().map(|(n, c)| (n.clone(), c * k)).collect() }
    }

    /// Groups radicals whose radicands share a squarefree part, so that the
    /// remaining square roots are linearly independent over the rationals.
    fn independent_terms(&self) -> Vec<(BigInt, Q)> {
        let mut classes: Vec<(BigInt, Q)> = Vec::new();
        for (n, c) in &self.radicals {
            let mut merged = false;
            for (rep, acc) in classes.iter_mut() {
                let prod = n * &*rep;
                let root = prod.sqrt();
                if &root * &root == prod {
                    // √n = (√(n·rep) / rep) · √rep
                    *acc = &*acc + &(c * &Q::from_bigints(root, rep.clone()));
                    merged = true;
                    break;
                }
            }
            if !merged {
                classes.push((n.clone(), c.clone()));
            }
        }
        classes.retain(|(_, c)| !c.is_zero());
        classes
    }

    /// Exact sign.
    ///
    /// After grouping, the value is zero exactly when every coefficient
    /// vanishes. Otherwise interval refinement of the square roots is
    /// guaranteed to separate it from zero.
    pub fn signum(&self) -> Ordering {
        if self.radicals.is_empty() {
            return self.rational.signum();
        }
        if let Some(s) = self.float_sign() {
            return s;
        }
        let terms = self.independent_terms();
        if terms.is_empty() {
            return self.rational.signum();
        }
        let base = self.rational.to_big();
        let mut bits = 32u32;
        loop {
            let (lo, hi) = enclose(&base, &terms, bits);
            if lo > BigRational::zero() {
                return Ordering::Greater;
            }
            if hi < BigRational::zero() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Sign from a double-precision evaluation, when the value clears a
    /// bound far above the accumulated rounding error. Each term carries a
    /// relative error of a few units in the last place; 1e-12 of the
    /// absolute sum leaves a margin of several hundred.
    fn float_sign(&self) -> Option<Ordering> {
        let mut value = self.rational.to_f64();
        let mut magnitude = value.abs();
        for (n, c) in &self.radicals {
            let t = c.to_f64() * num::ToPrimitive::to_f64(n)?.sqrt();
            value += t;
            magnitude += t.abs();
        }
        if !magnitude.is_finite() || magnitude < 1e-200 {
            return None;
        }
        (value.abs() > 1e-12 * magnitude).then(|| value.partial_cmp(&0.0).expect("finite"))
    }

    pub fn cmp_value(&self, other: &Surd) -> Ordering {
        self.sub(other).signum()
    }

    /// Rational enclosure `[lo, hi]` of the value, of width at most
    /// `Σ|c_k| / 2^bits`.
    pub fn bounds(&self, bits: u32) -> (Q, Q) {
        let (lo, hi) = enclose(&self.rational.to_big(), &self.independent_terms(), bits);
        (Q::from_big(lo), Q::from_big(hi))
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(80);
        (lo.to_f64() + hi.to_f64()) / 2.0
    }
}

fn enclose(base: &BigRational, terms: &[(BigInt, Q)], bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    let mut lo = base.clone();
    let mut hi = base.clone();
    for (n, c) in terms {
        let floor = (n << (2 * bits)).sqrt();
        let s_lo = BigRational::new(floor.clone(), scale.clone());
        let s_hi = BigRational::new(floor + 1u8, scale.clone());
        let c = c.to_big();
        if c > BigRational::zero() {
            lo += &c * s_lo;
            hi += &c * s_hi;
        } else {
            lo += &c * s_hi;
            hi += &c * s_lo;
        }
    }
    (lo, hi)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.radicals.is_empty() {
            write!(f, "{}", self.rational)?;
            first = false;
        }
        for (n, c) in &self.radicals {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            if mag != Q::one() {
                write!(f, "{mag}")?;
            }
            write!(f, "√{n}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn cancels_equal_surds() {
        // √8 − 2√2 = 0
        let s = Surd::sqrt(&q(8, 1)).sub(&Surd::sqrt(&q(2, 1)).scale(&q(2, 1)));
        assert_eq!(s.signum(), Ordering::Equal);
        // √(1/2) − √2/2 = 0
        let t = Surd::sqrt(&q(1, 2)).sub(&Surd::sqrt(&q(2, 1)).scale(&q(1, 2)));
        assert_eq!(t.signum(), Ordering::Equal);
    }

    #[test]
    fn merges_large_prime_square_factors() {
        // 53² · 2 is not reduced by the small-prime pass.
        let a = Surd::sqrt(&q(53 * 53 * 2, 1));
        let b = Surd::sqrt(&q(2, 1)).scale(&q(53, 1));
        assert_eq!(a.sub(&b).signum(), Ordering::Equal);
        assert_eq!(a.sub(&b.scale(&q(1_000_001, 1_000_000))).signum(), Ordering::Less);
    }

    #[test]
    fn separates_nearby_values() {
        // √2 + √3 against its nearest double
        let s = Surd::sqrt(&q(2, 1)).add(&Surd::sqrt(&q(3, 1)));
        let approx = Q::from_f64(std::f64::consts::SQRT_2 + 3f64.sqrt()).unwrap();
        let d = s.sub(&Surd::from_q(approx.clone()));
        assert_ne!(d.signum(), Ordering::Equal);
        let (lo, hi) = s.bounds(100);
        assert!(lo < hi && (hi.clone() - lo.clone()).to_f64() < 1e-25);
        assert!(Surd::sqrt(&q(18, 1)).sub(&Surd::sqrt(&q(2, 1)).scale(&q(3, 1))).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(Surd::from_q(q(-3, 2)).to_string(), "-3/2");
        assert_eq!(Surd::zero().to_string(), "0");
        let s = Surd::from_q(q(1, 1)).sub(&Surd::sqrt(&q(3, 4)));
        assert_eq!(s.to_string(), "1 - 1/2√3");
        assert_eq!(Surd::sqrt(&q(2, 1)).neg().add(&Surd::sqrt(&q(5, 1))).to_string(), "-√2 + √5");
    }

    #[test]
    fn agrees_with_floats_on_simple_cases() {
        let cases = [(2, 3, 1, 5), (7, 11, 13, 2), (1, 50, 49, 1)];
        for (a, b, c, d) in cases {
            let s = Surd::sqrt(&q(a, b)).sub(&Surd::sqrt(&q(c, d)));
            let f = (a as f64 / b as f64).sqrt() - (c as f64 / d as f64).sqrt();
            assert_eq!(s.signum(), f.partial_cmp(&0.0).unwrap());
            assert!((s.to_f64() - f).abs() < 1e-12);
        }
    }
}
