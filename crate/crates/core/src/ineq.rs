//! The inequality families on state profiles (S1–S4) and witness radii
//! (W1–W4b), each expanded into scalar linear forms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::arith::{Real, Scalar};
use crate::error::{Error, Result};
use crate::xcore::{Profile, WitnessX, XState};

/// A 2-element subset of the block indices, stored 0-based and sorted.
/// Displayed 1-based, e.g. `1,4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPair(u8, u8);

impl IndexPair {
    /// From 1-based indices in either order.
    pub fn new(i: usize, j: usize) -> Result<IndexPair> {
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
            return Err(Error::Input(format!("invalid index pair {{{i},{j}}}")));
        }
        Ok(IndexPair::from_zero_based(i - 1, j - 1))
    }

    pub(crate) fn from_zero_based(i: usize, j: usize) -> IndexPair {
        debug_assert!(i != j && i < 4 && j < 4);
        IndexPair(i.min(j) as u8, i.max(j) as u8)
    }

    /// 0-based members.
    pub fn indices(self) -> [usize; 2] {
        [self.0 as usize, self.1 as usize]
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 as usize == i || self.1 as usize == i
    }

    pub fn complement(self) -> IndexPair {
        let rest: Vec<usize> = (0..4).filter(|&k| !self.contains(k)).collect();
        IndexPair::from_zero_based(rest[0], rest[1])
    }

    /// All six pairs in lexicographic order.
    pub fn all() -> [IndexPair; 6] {
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].map(|(i, j)| IndexPair(i, j))
    }

    /// Relabel the members by a block permutation.
    pub fn map(self, sigma: &[usize; 4]) -> IndexPair {
        IndexPair::from_zero_based(sigma[self.0 as usize], sigma[self.1 as usize])
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0 + 1, self.1 + 1)
    }
}

impl FromStr for IndexPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<IndexPair> {
        let bad = || Error::Input(format!("invalid index pair {s:?}"));
        let (i, j) = s.split_once(',').ok_or_else(bad)?;
        IndexPair::new(i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?)
    }
}

/// `Σ pos_i·P_i − Σ neg_i·N_i ≥ 0`, where `(P, N)` is `(c, m)` for states and
/// `(r, |u|)` for witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinForm {
    pub pos: [i64; 4],
    pub neg: [i64; 4],
}

impl LinForm {
    pub fn eval<S: Scalar>(&self, p: &[S; 4], n: &[S; 4]) -> S {
        let mut acc = S::zero();
        for i in 0..4 {
            acc = add_multiple(acc, &p[i], self.pos[i]);
            acc = add_multiple(acc, &n[i], -self.neg[i]);
        }
        acc
    }

    pub fn map(&self, sigma: &[usize; 4]) -> LinForm {
        let mut out = LinForm { pos: [0; 4], neg: [0; 4] };
        for i in 0..4 {
            out.pos[sigma[i]] = self.pos[i];
            out.neg[sigma[i]] = self.neg[i];
        }
        out
    }
}

fn add_multiple<S: Scalar>(acc: S, x: &S, k: i64) -> S {
    match k {
        0 => acc,
        1 => acc.plus(x),
        -1 => acc.minus(x),
        _ => acc.plus(&x.times_q(&k.into())),
    }
}

fn unit(i: usize) -> [i64; 4] {
    let mut v = [0; 4];
    v[i] = 1;
    v
}

fn pair_vec(p: IndexPair) -> [i64; 4] {
    let [i, j] = p.indices();
    let mut v = [0; 4];
    v[i] = 1;
    v[j] = 1;
    v
}

fn add_vec(x: [i64; 4], y: [i64; 4], k: i64) -> [i64; 4] {
    std::array::from_fn(|i| x[i] + k * y[i])
}

/// `min(P·p, P·q) ≥ max(N·p, N·q)` for two pairs.
fn pair_pair_forms(p: IndexPair, q: IndexPair) -> Vec<LinForm> {
    let mut out = Vec::new();
    for lhs in [p, q] {
        for rhs in [p, q] {
            let f = LinForm { pos: pair_vec(lhs), neg: pair_vec(rhs) };
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// Inequalities on the state profile `(c, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateIneq {
    S1(IndexPair),
    S2(IndexPair),
    S3,
    S4(IndexPair, IndexPair),
}

impl StateIneq {
    pub fn forms(&self) -> Vec<LinForm> {
        match *self {
            StateIneq::S1(p) => {
                let [i, j] = p.indices();
                let mut out = Vec::with_capacity(4);
                for a in [i, j] {
                    for b in [i, j] {
                        out.push(LinForm { pos: unit(a), neg: unit(b) });
                    }
                }
                out
            }
            StateIneq::S2(p) => pair_pair_forms(p, p.complement()),
            StateIneq::S3 => (0..4).map(|i| LinForm { pos: add_vec([1; 4], unit(i), -1), neg: unit(i) }).collect(),
            StateIneq::S4(p, q) => pair_pair_forms(p, q),
        }
    }

    /// Representative among inequalities with identical forms: S2 is named by
    /// the pair containing index 1, S4 pairs are sorted.
    pub fn canonical(&self) -> StateIneq {
        match *self {
            StateIneq::S2(p) if !p.contains(0) => StateIneq::S2(p.complement()),
            StateIneq::S4(p, q) if q < p => StateIneq::S4(q, p),
            other => other,
        }
    }

    pub fn map(&self, sigma: &[usize; 4]) -> StateIneq {
        match *self {
            StateIneq::S1(p) => StateIneq::S1(p.map(sigma)),
            StateIneq::S2(p) => StateIneq::S2(p.map(sigma)),
            StateIneq::S3 => StateIneq::S3,
            StateIneq::S4(p, q) => StateIneq::S4(p.map(sigma), q.map(sigma)),
        }
    }

    /// The fifteen S4 instances over distinct pairs.
    pub fn all_s4() -> Vec<StateIneq> {
        let pairs = IndexPair::all();
        let mut out = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                out.push(StateIneq::S4(pairs[a], pairs[b]));
            }
        }
        out
    }
}

impl fmt::Display for StateIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateIneq::S1(p) => write!(f, "S1[{p}]"),
            StateIneq::S2(p) => write!(f, "S2[{p}]"),
            StateIneq::S3 => write!(f, "S3"),
            StateIneq::S4(p, q) => write!(f, "S4[{p}|{q}]"),
        }
    }
}

fn split_name(s: &str) -> Option<(&str, Option<&str>)> {
    let s = s.trim();
    match s.find('[') {
        None => Some((s, None)),
        Some(k) => {
            let args = s[k + 1..].strip_suffix(']')?;
            Some((&s[..k], Some(args)))
        }
    }
}

impl FromStr for StateIneq {
    type Err = Error;
    fn from_str(s: &str) -> Result<StateIneq> {
        let bad = || Error::IneqParse(s.to_string());
        let (kind, args) = split_name(s).ok_or_else(bad)?;
        let pair = |a: &str| a.parse::<IndexPair>().map_err(|_| bad());
        match (kind, args) {
            ("S1", Some(a)) => Ok(StateIneq::S1(pair(a)?)),
            ("S2", Some(a)) => Ok(StateIneq::S2(pair(a)?)),
            ("S3", None) => Ok(StateIneq::S3),
            ("S4", Some(a)) => {
                let (p, q) = a.split_once('|').ok_or_else(bad)?;
                Ok(StateIneq::S4(pair(p)?, pair(q)?))
            }
            _ => Err(bad()),
        }
    }
}

/// Inequalities on the witness radii `(r, |u|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessIneq {
    W1(IndexPair),
    W2(IndexPair),
    W3,
    W4a(IndexPair),
    W4b(IndexPair),
    /// `W4a ∧ W4b`.
    W4(IndexPair),
}

impl WitnessIneq {
    pub fn forms(&self) -> Vec<LinForm> {
        match *self {
            WitnessIneq::W1(p) => vec![LinForm { pos: pair_vec(p), neg: pair_vec(p) }],
            WitnessIneq::W2(p) => {
                let [i, j] = p.indices();
                vec![
                    LinForm { pos: add_vec([1; 4], unit(j), -1), neg: unit(i) },
                    LinForm { pos: add_vec([1; 4], unit(i), -1), neg: unit(j) },
                ]
            }
            WitnessIneq::W3 => vec![LinForm { pos: [1; 4], neg: [1; 4] }],
            WitnessIneq::W4a(p) => {
                let [k, l] = p.complement().indices();
                [k, l].iter().map(|&m| LinForm { pos: add_vec(pair_vec(p), unit(m), 2), neg: pair_vec(p) }).collect()
            }
            WitnessIneq::W4b(p) => {
                let [k, l] = p.complement().indices();
                let pos = add_vec(pair_vec(p), pair_vec(p.complement()), 2);
                [k, l].iter().map(|&m| LinForm { pos, neg: add_vec(pair_vec(p), unit(m), 2) }).collect()
            }
            WitnessIneq::W4(p) => {
                let mut v = WitnessIneq::W4a(p).forms();
                v.extend(WitnessIneq::W4b(p).forms());
                v
            }
        }
    }

    pub fn map(&self, sigma: &[usize; 4]) -> WitnessIneq {
        match *self {
            WitnessIneq::W1(p) => WitnessIneq::W1(p.map(sigma)),
            WitnessIneq::W2(p) => WitnessIneq::W2(p.map(sigma)),
            WitnessIneq::W3 => WitnessIneq::W3,
            WitnessIneq::W4a(p) => WitnessIneq::W4a(p.map(sigma)),
            WitnessIneq::W4b(p) => WitnessIneq::W4b(p.map(sigma)),
            WitnessIneq::W4(p) => WitnessIneq::W4(p.map(sigma)),
        }
    }
}

impl fmt::Display for WitnessIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessIneq::W1(p) => write!(f, "W1[{p}]"),
            WitnessIneq::W2(p) => write!(f, "W2[{p}]"),
            WitnessIneq::W3 => write!(f, "W3"),
            WitnessIneq::W4a(p) => write!(f, "W4a[{p}]"),
            WitnessIneq::W4b(p) => write!(f, "W4b[{p}]"),
            WitnessIneq::W4(p) => write!(f, "W4[{p}]"),
        }
    }
}

impl FromStr for WitnessIneq {
    type Err = Error;
    fn from_str(s: &str) -> Result<WitnessIneq> {
        let bad = || Error::IneqParse(s.to_string());
        let (kind, args) = split_name(s).ok_or_else(bad)?;
        let pair = || args.ok_or_else(bad)?.parse::<IndexPair>().map_err(|_| bad());
        match kind {
            "W1" => Ok(WitnessIneq::W1(pair()?)),
            "W2" => Ok(WitnessIneq::W2(pair()?)),
            "W3" if args.is_none() => Ok(WitnessIneq::W3),
            "W4a" => Ok(WitnessIneq::W4a(pair()?)),
            "W4b" => Ok(WitnessIneq::W4b(pair()?)),
            "W4" => Ok(WitnessIneq::W4(pair()?)),
            _ => Err(bad()),
        }
    }
}

string_serde!(IndexPair);
string_serde!(StateIneq);
string_serde!(WitnessIneq);

/// Verdict of an inequality: `slack` is the minimum of `LHS − RHS` over the
/// constituent scalar inequalities.
#[derive(Clone, Debug, PartialEq)]
pub struct Margin<S> {
    pub holds: bool,
    pub slack: S,
}

impl<S: Real> Margin<S> {
    fn from_slack(slack: S, p: &Profile<S>) -> Margin<S> {
        Margin { holds: S::nonnegative(&slack, p.scale(), p.tol), slack }
    }

    /// Margin of a conjunction.
    pub fn all(margins: impl IntoIterator<Item = Margin<S>>) -> Option<Margin<S>> {
        margins.into_iter().reduce(|a, b| Margin {
            holds: a.holds && b.holds,
            slack: if b.slack.cmp_scalar(&a.slack) == Ordering::Less { b.slack } else { a.slack },
        })
    }
}

/// Minimum of the forms evaluated on `(p.c, p.m)`.
pub fn min_form<S: Scalar>(forms: &[LinForm], p: &Profile<S>) -> S {
    forms
        .iter()
        .map(|f| f.eval(&p.c, &p.m))
        .reduce(|a, b| if b.cmp_scalar(&a) == Ordering::Less { b } else { a })
        .expect("inequalities have at least one form")
}

pub fn eval_state_profile<S: Real>(ineq: &StateIneq, p: &Profile<S>) -> Margin<S> {
    Margin::from_slack(min_form(&ineq.forms(), p), p)
}

pub fn eval_witness_radii<S: Real>(ineq: &WitnessIneq, r: &Profile<S>) -> Margin<S> {
    Margin::from_slack(min_form(&ineq.forms(), r), r)
}

pub fn eval_state<S: Real>(ineq: &StateIneq, x: &XState) -> Result<Margin<S>> {
    Ok(eval_state_profile(ineq, &x.profile()?))
}

pub fn eval_witness<S: Real>(ineq: &WitnessIneq, w: &WitnessX) -> Margin<S> {
    eval_witness_radii(ineq, &w.radii())
}

/// Per-index slacks of S3, `Σ_{j≠i} c_j − m_i`.
pub fn s3_slacks<S: Real>(p: &Profile<S>) -> [S; 4] {
    let forms = StateIneq::S3.forms();
    std::array::from_fn(|i| forms[i].eval(&p.c, &p.m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Surd, Q};
    use proptest::prelude::*;

    fn pr(c: [f64; 4], m: [f64; 4]) -> Profile<f64> {
        Profile::new(c, m)
    }

    fn exact(c: [i64; 4], m: [i64; 4]) -> Profile<Surd> {
        Profile::new(c.map(|x| Surd::from_q(Q::from_i64(x))), m.map(|x| Surd::from_q(Q::from_i64(x))))
    }

    fn s(x: &str) -> StateIneq {
        x.parse().unwrap()
    }

    fn w(x: &str) -> WitnessIneq {
        x.parse().unwrap()
    }

    #[test]
    fn rho1_margins() {
        let p = exact([2, 1, 1, 2], [2, 0, 1, 0]);
        let m = eval_state_profile(&s("S1[1,4]"), &p);
        assert!(m.holds);
        assert!(m.slack.is_zero());
        let m = eval_state_profile(&s("S4[1,3|2,3]"), &p);
        assert!(!m.holds);
        assert_eq!(m.slack, Surd::from_q(Q::from_i64(-1)));
    }

    #[test]
    fn s3_on_all_ones() {
        let m = eval_state_profile(&StateIneq::S3, &pr([1.0; 4], [1.0; 4]));
        assert!(m.holds);
        assert_eq!(m.slack, 2.0);
    }

    #[test]
    fn witness_examples() {
        let m = eval_witness_radii(&WitnessIneq::W3, &pr([1.0; 4], [1.0; 4]));
        assert!(m.holds && m.slack == 0.0);
        let r = pr([0.0, 1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]);
        let m = eval_witness_radii(&w("W1[1,4]"), &r);
        assert!(!m.holds);
        assert_eq!(m.slack, -2.0);
        assert!(eval_witness_radii(&WitnessIneq::W3, &r).holds);
        let wx = WitnessX::from_i64([1, 1, 2, 1], [1, 1, 2, 1], [(-2, 0), (0, 0), (0, 0), (-2, 0)]).unwrap();
        // r = (1,1,2,1), |u| = (2,0,0,2): 2 + 1 + 2·min(1,1) − 2 = 3
        let m = eval_witness::<Surd>(&w("W4a[3,4]"), &wx);
        assert!(m.holds);
        assert_eq!(m.slack, Surd::from_q(Q::from_i64(3)));
    }

    #[test]
    fn names_round_trip() {
        for name in ["S1[1,4]", "S2[2,3]", "S3", "S4[1,3|2,4]", "S4[1,2|1,2]"] {
            assert_eq!(s(name).to_string(), name);
        }
        for name in ["W1[1,4]", "W2[2,3]", "W3", "W4a[3,4]", "W4b[1,2]", "W4[2,3]"] {
            assert_eq!(w(name).to_string(), name);
        }
        for bad in ["S1[1,1]", "S5", "S1[1,5]", "S3[1,2]", "W4c[1,2]", "S4[1,2]"] {
            assert!(bad.parse::<StateIneq>().is_err() && bad.parse::<WitnessIneq>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fifteen_distinct_s4() {
        let all = StateIneq::all_s4();
        assert_eq!(all.len(), 15);
        assert!(all.iter().all(|x| x.canonical() == *x));
    }

    #[test]
    fn w4_forms_match_their_displays() {
        // W4a[1,2]: r1 + r2 + 2 min(r3, r4) ≥ u1 + u2
        let f = w("W4a[1,2]").forms();
        assert_eq!(f[0], LinForm { pos: [1, 1, 2, 0], neg: [1, 1, 0, 0] });
        assert_eq!(f[1], LinForm { pos: [1, 1, 0, 2], neg: [1, 1, 0, 0] });
        // W4b[1,2]: r1 + r2 + 2(r3 + r4) ≥ u1 + u2 + 2 max(u3, u4)
        let f = w("W4b[1,2]").forms();
        assert_eq!(f[0], LinForm { pos: [1, 1, 2, 2], neg: [1, 1, 2, 0] });
        assert_eq!(f[1], LinForm { pos: [1, 1, 2, 2], neg: [1, 1, 0, 2] });
    }

    fn profile() -> impl Strategy<Value = Profile<f64>> {
        (proptest::array::uniform4(0.0..10.0f64), proptest::array::uniform4(0.0..10.0f64)).prop_map(|(c, m)| pr(c, m))
    }

    fn direct(ineq: &StateIneq, p: &Profile<f64>) -> f64 {
        let (c, m) = (&p.c, &p.m);
        let sum = |v: &[f64; 4], q: IndexPair| q.indices().iter().map(|&k| v[k]).sum::<f64>();
        match *ineq {
            StateIneq::S1(q) => {
                let [i, j] = q.indices();
                c[i].min(c[j]) - m[i].max(m[j])
            }
            StateIneq::S2(q) => {
                let r = q.complement();
                sum(c, q).min(sum(c, r)) - sum(m, q).max(sum(m, r))
            }
            StateIneq::S3 => (0..4).map(|i| c.iter().sum::<f64>() - c[i] - m[i]).fold(f64::INFINITY, f64::min),
            StateIneq::S4(q, r) => sum(c, q).min(sum(c, r)) - sum(m, q).max(sum(m, r)),
        }
    }

    fn any_state_ineq() -> impl Strategy<Value = StateIneq> {
        let pairs = IndexPair::all();
        prop_oneof![
            (0usize..6).prop_map(move |k| StateIneq::S1(pairs[k])),
            (0usize..6).prop_map(move |k| StateIneq::S2(pairs[k])),
            Just(StateIneq::S3),
            (0usize..6, 0usize..6).prop_map(move |(a, b)| StateIneq::S4(pairs[a], pairs[b])),
        ]
    }

    proptest! {
        #[test]
        fn forms_agree_with_min_max_definitions(p in profile(), ineq in any_state_ineq()) {
            let got = eval_state_profile(&ineq, &p).slack;
            prop_assert!((got - direct(&ineq, &p)).abs() < 1e-12);
        }

        #[test]
        fn symmetric_presentations_agree(p in profile(), a in 0usize..6, b in 0usize..6) {
            let pairs = IndexPair::all();
            let (x, y) = (pairs[a], pairs[b]);
            let m = |i: StateIneq| eval_state_profile(&i, &p).slack;
            prop_assert_eq!(m(StateIneq::S4(x, y)), m(StateIneq::S4(y, x)));
            prop_assert_eq!(m(StateIneq::S2(x)), m(StateIneq::S2(x.complement())));
            prop_assert_eq!(m(StateIneq::S2(x)), m(StateIneq::S4(x, x.complement())));
            let [i, j] = x.indices();
            prop_assert_eq!(m(StateIneq::S1(x)), m(StateIneq::S1(IndexPair::from_zero_based(j, i))));
        }

        #[test]
        fn slacks_scale_linearly(p in profile(), ineq in any_state_ineq(), lambda in 0.1..10.0f64) {
            let scaled = pr(p.c.map(|x| x * lambda), p.m.map(|x| x * lambda));
            let a = eval_state_profile(&ineq, &p).slack * lambda;
            let b = eval_state_profile(&ineq, &scaled).slack;
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }

        #[test]
        fn s4_on_a_repeated_pair_holds_for_psd(c in proptest::array::uniform4(0i64..20), f in proptest::array::uniform4(0i64..=4), a in 0usize..6) {
            // m_i ≤ c_i as for any psd block
            let m: [i64; 4] = std::array::from_fn(|i| c[i] * f[i] / 4);
            let p = exact(c, m);
            let x = IndexPair::all()[a];
            prop_assert!(eval_state_profile(&StateIneq::S4(x, x), &p).holds);
        }

        #[test]
        fn w1_implies_w4a(r in proptest::array::uniform4(0.0..5.0f64), u in proptest::array::uniform4(0.0..5.0f64), a in 0usize..6) {
            let x = IndexPair::all()[a];
            let p = pr(r, u);
            if eval_witness_radii(&WitnessIneq::W1(x), &p).slack >= 0.0 {
                prop_assert!(eval_witness_radii(&WitnessIneq::W4a(x), &p).slack >= 0.0);
            }
        }
    }
}
