//! Seeded random states and witnesses for the property suites.
//!
//! Most samples have rational radii `√(a_i b_i)` and rational moduli `|z_i|`
//! (diagonal pairs `c·k, c/k` and Pythagorean phases), so exact verdicts stay
//! in rational arithmetic. A share of general rational and float samples
//! keeps irrational radii in play.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{CQ, Q};
use crate::cones::{member, ConeId};
use crate::error::Result;
use crate::xcore::{GhzDiagonal, WitnessX, XMatrix, XState};

/// Which kind of entries a sample was drawn with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    RationalRadii,
    GeneralRational,
    Float,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

const PYTHAGOREAN: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn ratio(&mut self, max_num: i64, max_den: i64) -> Q {
        Q::new(self.rng.gen_range(0..=max_num), self.rng.gen_range(1..=max_den))
    }

    /// A nonnegative radius, zero one time in eight.
    fn radius(&mut self) -> Q {
        if self.rng.gen_ratio(1, 8) {
            Q::zero()
        } else {
            Q::new(self.rng.gen_range(1..=12), self.rng.gen_range(1..=4))
        }
    }

    /// A unit complex number with rational parts.
    fn phase(&mut self) -> CQ {
        let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1 } else { -1 };
        if self.rng.gen_ratio(1, 3) {
            let s = sign(&mut self.rng);
            return if self.rng.gen_bool(0.5) { CQ::from_i64(s, 0) } else { CQ::from_i64(0, s) };
        }
        let (p, q, h) = PYTHAGOREAN[self.rng.gen_range(0..PYTHAGOREAN.len())];
        let (p, q) = if self.rng.gen_bool(0.5) { (p, q) } else { (q, p) };
        CQ::new(Q::new(sign(&mut self.rng) * p, h), Q::new(sign(&mut self.rng) * q, h))
    }

    /// A `(a, b)` pair with `√(ab) = c`.
    fn split(&mut self, c: &Q) -> (Q, Q) {
        let k = Q::new(self.rng.gen_range(1..=4), self.rng.gen_range(1..=4));
        (c * &k, c / &k)
    }

    /// Psd X-state with rational radii; `|z_i| ≤ c_i · fill` entrywise.
    pub fn rational_radii_state(&mut self) -> XState {
        let mut m = XMatrix::zero();
        let fill = Q::new(self.rng.gen_range(4..=12), 8);
        for i in 0..4 {
            let c = self.radius();
            (m.a[i], m.b[i]) = self.split(&c);
            let frac = &self.ratio(8, 8).min(Q::one()) * &fill;
            m.z[i] = self.phase().scale(&(&c * &frac.min(Q::one())));
        }
        XState::new(m)
    }

    /// Psd X-state with arbitrary small rational entries.
    pub fn general_state(&mut self) -> XState {
        let mut m = XMatrix::zero();
        for i in 0..4 {
            m.a[i] = self.ratio(9, 3);
            m.b[i] = self.ratio(9, 3);
            let mut z = CQ::new(
                Q::new(self.rng.gen_range(-9..=9), self.rng.gen_range(1..=3)),
                Q::new(self.rng.gen_range(-9..=9), self.rng.gen_range(1..=3)),
            );
            let ab = &m.a[i] * &m.b[i];
            while z.norm_sqr() > ab {
                z = z.scale(&Q::new(1, 2));
                if ab.is_zero() {
                    z = CQ::zero();
                }
            }
            m.z[i] = z;
        }
        XState::new(m)
    }

    /// Psd X-state from random floats (read exactly).
    pub fn float_state(&mut self) -> XState {
        let mut a = [0.0f64; 4];
        let mut b = [0.0f64; 4];
        let mut z = [(0.0, 0.0); 4];
        for i in 0..4 {
            a[i] = self.rng.gen_range(0.0..3.0);
            b[i] = self.rng.gen_range(0.0..3.0);
            let r = (a[i] * b[i]).sqrt() * self.rng.gen_range(0.0..1.0);
            let t: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
            z[i] = (r * t.cos(), r * t.sin());
        }
        let m = XMatrix::from_f64(a, b, z).expect("finite entries");
        if m.is_psd() {
            XState::new(m)
        } else {
            // Rounding can push a block past the boundary; halve its z.
            let mut m = m;
            for i in 0..4 {
                while &m.a[i] * &m.b[i] < m.z[i].norm_sqr() {
                    m.z[i] = m.z[i].scale(&Q::new(1, 2));
                }
            }
            XState::new(m)
        }
    }

    /// A psd X-state of a randomly chosen kind.
    pub fn state(&mut self) -> (Kind, XState) {
        match self.rng.gen_range(0..20) {
            0..=12 => (Kind::RationalRadii, self.rational_radii_state()),
            13..=17 => (Kind::GeneralRational, self.general_state()),
            _ => (Kind::Float, self.float_state()),
        }
    }

    /// An exact psd state; float samples are excluded.
    pub fn exact_state(&mut self) -> XState {
        if self.rng.gen_ratio(3, 4) {
            self.rational_radii_state()
        } else {
            self.general_state()
        }
    }

    /// A witness `X(s, t, u)`, mostly with rational radii `√(s_i t_i)`.
    pub fn witness(&mut self) -> WitnessX {
        let mut m = XMatrix::zero();
        let rational = self.rng.gen_ratio(3, 4);
        for i in 0..4 {
            if rational {
                let r = self.radius();
                (m.a[i], m.b[i]) = self.split(&r);
            } else {
                m.a[i] = self.ratio(9, 3);
                m.b[i] = self.ratio(9, 3);
            }
            m.z[i] = self.phase().scale(&self.ratio(24, 4));
        }
        WitnessX::new(m).expect("nonnegative diagonals")
    }

    /// A psd GHZ-diagonal state with small rational entries.
    pub fn ghz(&mut self) -> GhzDiagonal {
        let a: [Q; 4] = std::array::from_fn(|_| self.radius());
        let z = std::array::from_fn(|i| {
            let f = Q::new(self.rng.gen_range(-6..=6), 6);
            &a[i] * &f
        });
        GhzDiagonal { a, z }
    }

    /// A random element of `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

fn scaled_state(x: &XState, k: i64) -> XState {
    let mut m = x.matrix().clone();
    m.z = m.z.map(|z| z.scale(&Q::new(k, 8)));
    XState::new(m)
}

fn scaled_witness(w: &WitnessX, k: i64) -> WitnessX {
    let mut m = w.matrix().clone();
    m.z = m.z.map(|z| z.scale(&Q::new(k, 8)));
    WitnessX::new(m).expect("diagonal unchanged")
}

/// Shrink the anti-diagonal of `x` by `k/8` for the largest `k ≤ 8` that
/// lands in `cone` (exact verdicts). `k = 0` always does.
pub fn shrink_state_into(x: &XState, cone: &ConeId) -> Result<XState> {
    for k in (1..=8).rev() {
        let y = scaled_state(x, k);
        if member::<crate::Surd>(&y, cone)?.holds {
            return Ok(y);
        }
    }
    Ok(scaled_state(x, 0))
}

/// Witness counterpart of [`shrink_state_into`] for a dual cone.
pub fn shrink_witness_into(w: &WitnessX, cone: &ConeId) -> Result<WitnessX> {
    for k in (1..=8).rev() {
        let v = scaled_witness(w, k);
        if member::<crate::Surd>(&v, cone)?.holds {
            return Ok(v);
        }
    }
    Ok(scaled_witness(w, 0))
}

/// Float-verdict variants of the shrinking step.
pub fn shrink_state_into_float(x: &XState, cone: &ConeId) -> Result<XState> {
    for k in (1..=8).rev() {
        let y = scaled_state(x, k);
        if member::<f64>(&y, cone)?.holds {
            return Ok(y);
        }
    }
    Ok(scaled_state(x, 0))
}

pub fn shrink_witness_into_float(w: &WitnessX, cone: &ConeId) -> Result<WitnessX> {
    for k in (1..=8).rev() {
        let v = scaled_witness(w, k);
        if member::<f64>(&v, cone)?.holds {
            return Ok(v);
        }
    }
    Ok(scaled_witness(w, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Surd;

    #[test]
    fn samples_are_psd_and_reproducible() {
        let mut s = Sampler::new(7);
        let mut t = Sampler::new(7);
        for _ in 0..200 {
            let (_, x) = s.state();
            assert!(x.psd());
            assert_eq!(x, t.state().1);
            assert!(s.ghz().is_psd());
            t.ghz();
        }
    }

    #[test]
    fn rational_radii_stay_rational() {
        let mut s = Sampler::new(1);
        for _ in 0..100 {
            let p = s.rational_radii_state().profile::<Surd>().unwrap();
            assert!(p.c.iter().chain(&p.m).all(|v| v.as_rational().is_some()));
        }
    }

    #[test]
    fn shrinking_lands_inside() {
        let mut s = Sampler::new(3);
        let bottom = ConeId::bottom();
        for _ in 0..50 {
            let x = shrink_state_into(&s.exact_state(), &bottom).unwrap();
            assert!(member::<Surd>(&x, &bottom).unwrap().holds);
            let w = shrink_witness_into(&s.witness(), &bottom.polar()).unwrap();
            assert!(member::<Surd>(&w, &bottom.polar()).unwrap().holds);
        }
    }
}
