//! Witness search and inequality implication by exact linear programming
//! over witness radii `r_i = √(s_i t_i)` and magnitudes `|u_i|`.

pub mod lp;
pub mod redundancy;

use std::cmp::Ordering;

use num::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{Real, Scalar, Surd, CQ, Q};
use crate::cones::{catalog, cone_forms, member, ConeId, CriteriaSet};
use crate::error::{Error, Result};
use crate::ineq::{eval_witness, LinForm, WitnessIneq};
use crate::xcore::{pair, WitnessX, XMatrix, XState};

use lp::{Constraint, LinearProgram, LpOutcome, Relation, Sense};

/// Homogeneous linear constraints `Σ pos_k r_k − Σ neg_k u_k ≥ 0` over the
/// nonnegative variables `r_1..r_4, u_1..u_4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinSystem {
    pub constraints: Vec<LinForm>,
}

impl LinSystem {
    pub const VARIABLES: [&'static str; 8] = ["r1", "r2", "r3", "r4", "u1", "u2", "u3", "u4"];

    pub fn new(constraints: Vec<LinForm>) -> LinSystem {
        LinSystem { constraints }
    }

    pub fn from_ineqs(ineqs: &[WitnessIneq]) -> LinSystem {
        let mut forms: Vec<LinForm> = ineqs.iter().flat_map(|i| i.forms()).collect();
        forms.sort();
        forms.dedup();
        LinSystem { constraints: forms }
    }

    /// The system of a dual cone's criteria.
    pub fn for_dual_cone(cone: &ConeId) -> Result<LinSystem> {
        if !cone.is_dual() {
            return Err(Error::Input(format!("{cone} is not a dual cone")));
        }
        Ok(LinSystem::new(cone_forms(cone).to_vec()))
    }

    fn row(form: &LinForm) -> Vec<Q> {
        form.pos.iter().map(|&p| Q::from_i64(p)).chain(form.neg.iter().map(|&n| Q::from_i64(-n))).collect()
    }

    /// The program with every constraint, `Σr + Σu ≤ 1`, and the given
    /// objective over `(r, u)`.
    pub fn program<S: Scalar>(&self, sense: Sense, objective: Vec<S>) -> LinearProgram<S> {
        let mut prog = LinearProgram::new(8, sense, objective);
        for f in &self.constraints {
            prog.constrain(Constraint::new(LinSystem::row(f), Relation::Ge, Q::zero()));
        }
        prog.constrain(Constraint::from_i64(&[1; 8], Relation::Le, 1));
        prog
    }
}

/// Evaluation of one criterion on the certificate's witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub criterion: String,
    pub holds: bool,
    pub slack: f64,
}

/// A witness proving that a state lies outside a primal cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub cone: ConeId,
    pub witness: WitnessX,
    /// Pairing of the witness with the certified state.
    pub value: Q,
    pub verified: bool,
    pub transcript: Vec<TranscriptEntry>,
}

impl Certificate {
    /// Independent re-verification: the witness lies in the dual cone and
    /// pairs strictly negatively with `rho`.
    pub fn verify(&self, rho: &XState) -> bool {
        let dual = self.cone.polar();
        let inside = member::<Surd>(&self.witness, &dual).map(|m| m.holds).unwrap_or(false);
        let value = pair(&self.witness, rho);
        inside && value.is_negative() && value == self.value
    }
}

/// Surrogate LP for a state and a dual system: minimize `Σ r_i c_i − Σ u_i m_i`.
fn surrogate(rho: &XState, system: &LinSystem) -> Result<LpOutcome<Surd>> {
    let p = rho.profile::<Surd>()?;
    let objective: Vec<Surd> = p.c.iter().cloned().chain(p.m.iter().map(|m| Surd::zero().minus(m))).collect();
    Ok(system.program(Sense::Minimize, objective).solve())
}

/// Certify that `rho` is outside the primal cone `cone`, or return `None`
/// when it is a member.
///
/// The diagonal must be nonnegative. A returned witness proves
/// non-membership for any such matrix; for psd states `None` is returned
/// exactly when the cone's criteria hold.
pub fn certify(rho: &XState, cone: &ConeId) -> Result<Option<Certificate>> {
    if cone.is_dual() {
        return Err(Error::Input(format!("{cone} is a dual cone; certify takes primal cones")));
    }
    let dual = cone.polar();
    let system = LinSystem::for_dual_cone(&dual)?;
    let LpOutcome::Optimal { value: optimum, x } = surrogate(rho, &system)? else {
        return Err(Error::InternalConsistency("certification LP is bounded and feasible".into()));
    };
    if optimum.signum() != Ordering::Less {
        return Ok(None);
    }
    let r: [Q; 4] = std::array::from_fn(|i| x[i].clone());
    let u: [Q; 4] = std::array::from_fn(|i| x[4 + i].clone());
    let witness = lift(rho, &r, &u, &optimum)?;
    let value = pair(&witness, rho);
    let transcript = transcript(&witness, &dual);
    let inside = member::<Surd>(&witness, &dual)?.holds;
    let cert = Certificate { cone: *cone, witness, verified: inside && value.is_negative(), value, transcript };
    if !cert.verified {
        return Err(Error::InternalConsistency(format!("lifted witness for {cone} failed verification")));
    }
    Ok(Some(cert))
}

fn transcript(w: &WitnessX, dual: &ConeId) -> Vec<TranscriptEntry> {
    let CriteriaSet::Witness(ineqs) = catalog(dual) else { return Vec::new() };
    ineqs
        .iter()
        .map(|i| {
            let m = eval_witness::<Surd>(i, w);
            TranscriptEntry { criterion: i.to_string(), holds: m.holds, slack: m.slack.to_f64() }
        })
        .collect()
}

/// Rational lower bound of `√q` that is positive for `q > 0`.
fn sqrt_below(q: &Q, bits: u32) -> Q {
    if let Some(root) = q.sqrt_exact() {
        return root;
    }
    let (lo, hi) = Surd::sqrt(q).bounds(bits);
    if lo.is_positive() {
        lo
    } else {
        hi
    }
}

/// Turn an LP vertex `(r, û)` into a rational witness with radii exactly `r`
/// and `|u_i| ≤ û_i`, tightening the rational approximations of the balanced
/// split and the phases until the exact pairing is negative.
fn lift(rho: &XState, r: &[Q; 4], uhat: &[Q; 4], optimum: &Surd) -> Result<WitnessX> {
    let (a, b, z) = (rho.a(), rho.b(), rho.z());
    // ε′ = |opt| / (2 (1 + Σ_degenerate (a_j + b_j))), with a rational lower bound of |opt|.
    let degenerate: Q =
        (0..4).filter(|&i| r[i].is_positive() && (a[i].is_zero() != b[i].is_zero())).map(|i| &a[i] + &b[i]).sum();
    let mut opt_bits = 64;
    let gap = loop {
        let (_, hi) = optimum.bounds(opt_bits);
        if hi.is_negative() {
            break -hi;
        }
        opt_bits *= 2;
    };
    let mut eps = &gap / &(&(&degenerate + &Q::one()) * &Q::from_i64(2));
    let mut bits = 32;
    for _ in 0..8 {
        let mut s: [Q; 4] = Default::default();
        let mut t: [Q; 4] = Default::default();
        let mut u: [CQ; 4] = Default::default();
        for i in 0..4 {
            if r[i].is_positive() {
                match (a[i].is_positive(), b[i].is_positive()) {
                    (true, true) => {
                        let kappa = sqrt_below(&(&b[i] / &a[i]), bits);
                        s[i] = &r[i] * &kappa;
                        t[i] = &r[i] / &kappa;
                    }
                    (false, true) => {
                        t[i] = eps.clone();
                        s[i] = &(&r[i] * &r[i]) / &eps;
                    }
                    (true, false) => {
                        s[i] = eps.clone();
                        t[i] = &(&r[i] * &r[i]) / &eps;
                    }
                    (false, false) => {
                        s[i] = r[i].clone();
                        t[i] = r[i].clone();
                    }
                }
            }
            if uhat[i].is_positive() {
                u[i] = if z[i].is_zero() {
                    CQ::real(-&uhat[i])
                } else {
                    // −û · z̄ · λ with λ ≤ 1/|z| rational
                    let lambda = sqrt_below(&z[i].norm_sqr().recip(), bits);
                    z[i].conj().scale(&(&(-&uhat[i]) * &lambda))
                };
            }
        }
        let w = WitnessX::new(XMatrix { a: s, b: t, z: u })?;
        if pair(&w, rho).is_negative() {
            return Ok(w);
        }
        bits *= 2;
        eps = &eps / &Q::from_i64(2);
    }
    Err(Error::InternalConsistency("witness lifting did not converge".into()))
}

/// A point `(r, u) ≥ 0` satisfying the assumptions but not the claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub r: [Q; 4],
    pub u: [Q; 4],
}

impl Counterexample {
    /// The witness `X(r, r, u)`, whose radii are `r` and magnitudes `u`.
    pub fn to_witness(&self) -> WitnessX {
        let m = XMatrix { a: self.r.clone(), b: self.r.clone(), z: self.u.clone().map(CQ::real) };
        WitnessX::new(m).expect("r is nonnegative")
    }
}

/// Outcome of an implication query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implication {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// Scale a nonnegative rational vector to a primitive integer vector.
fn primitive(x: &[Q]) -> Vec<Q> {
    let lcm = x.iter().fold(num::BigInt::from(1), |acc, v| acc.lcm(&v.denom()));
    let ints: Vec<num::BigInt> =
        x.iter().map(|v| (v.to_big() * num::BigRational::from(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num::BigInt::from(0), |acc, v| acc.gcd(v));
    if g == num::BigInt::from(0) {
        return x.to_vec();
    }
    ints.into_iter().map(|v| Q::from(v / &g)).collect()
}

/// Whether `form ≥ 0` holds on every `(r, u) ≥ 0` satisfying `assumed`.
pub fn implies_form(assumed: &LinSystem, form: &LinForm) -> Implication {
    let objective: Vec<Q> = LinSystem::row(form);
    match assumed.program(Sense::Minimize, objective).solve() {
        LpOutcome::Optimal { value, x } if value.is_negative() => {
            let x = primitive(&x);
            let r = std::array::from_fn(|i| x[i].clone());
            let u = std::array::from_fn(|i| x[4 + i].clone());
            Implication { holds: false, counterexample: Some(Counterexample { r, u }) }
        }
        _ => Implication { holds: true, counterexample: None },
    }
}

/// Whether every `(r, u) ≥ 0` satisfying all of `assumed` satisfies `claimed`.
pub fn implies(assumed: &[WitnessIneq], claimed: &WitnessIneq) -> Implication {
    let system = LinSystem::from_ineqs(assumed);
    for form in claimed.forms() {
        let outcome = implies_form(&system, &form);
        if !outcome.holds {
            return outcome;
        }
    }
    Implication { holds: true, counterexample: None }
}

/// Check a counterexample by direct evaluation of the inequalities.
pub fn check_counterexample(assumed: &[WitnessIneq], claimed: &WitnessIneq, cx: &Counterexample) -> bool {
    let w = cx.to_witness();
    assumed.iter().all(|i| eval_witness::<Surd>(i, &w).holds) && !eval_witness::<Surd>(claimed, &w).holds
}

/// Scalar margin of a form on radii/magnitudes, for diagnostics.
pub fn form_value<S: Real>(form: &LinForm, r: &[S; 4], u: &[S; 4]) -> S {
    form.eval(r, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{ConeId, LatticeProfile};
    use crate::xcore::GhzDiagonal;

    fn w(s: &str) -> WitnessIneq {
        s.parse().unwrap()
    }

    fn cone(s: &str) -> ConeId {
        s.parse().unwrap()
    }

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn rho(z: [i64; 4]) -> XState {
        XState::from_i64([2, 1, 1, 2], [2, 1, 1, 2], z.map(|x| (x, 0)))
    }

    #[test]
    fn maximize_u1_under_w3_with_fixed_radii() {
        let mut prog = LinearProgram::new(8, Sense::Maximize, vec![q(0), q(0), q(0), q(0), q(1), q(0), q(0), q(0)]);
        for f in w("W3").forms() {
            prog.constrain(Constraint::new(LinSystem::row(&f), Relation::Ge, Q::zero()));
        }
        for k in 0..4 {
            let mut e = vec![0; 8];
            e[k] = 1;
            prog.constrain(Constraint::from_i64(&e, Relation::Eq, 1));
        }
        let out = prog.solve();
        assert_eq!(out, LpOutcome::Optimal { value: q(4), x: vec![q(1), q(1), q(1), q(1), q(4), q(0), q(0), q(0)] });
    }

    #[test]
    fn w3_with_large_u1_is_infeasible() {
        let mut prog = LinearProgram::new(8, Sense::Minimize, vec![Q::zero(); 8]);
        for f in w("W3").forms() {
            prog.constrain(Constraint::new(LinSystem::row(&f), Relation::Ge, Q::zero()));
        }
        prog.constrain(Constraint::from_i64(&[1, 1, 1, 1, 0, 0, 0, 0], Relation::Eq, 1));
        prog.constrain(Constraint::from_i64(&[0, 0, 0, 0, 1, 0, 0, 0], Relation::Ge, 2));
        assert_eq!(prog.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn rho1_alpha_system_has_nonnegative_optimum_by_vertex_enumeration() {
        // min Σ r_i c_i − Σ u_i m_i over W1[1,4], W1[2,3], Σr = 1.
        let c = [2i64, 1, 1, 2];
        let m = [2i64, 0, 1, 0];
        let forms = LinSystem::for_dual_cone(&cone("A*")).unwrap().constraints;
        let mut rows: Vec<Vec<Q>> = forms.iter().map(LinSystem::row).collect();
        for k in 0..8 {
            let mut e = vec![q(0); 8];
            e[k] = q(1);
            rows.push(e);
        }
        let sum_r = vec![q(1), q(1), q(1), q(1), q(0), q(0), q(0), q(0)];
        let objective = |x: &[Q]| -> Q { (0..4).map(|i| &(&x[i] * &q(c[i])) - &(&x[4 + i] * &q(m[i]))).sum() };
        let idx: Vec<usize> = (0..rows.len()).collect();
        let mut best: Option<Q> = None;
        for subset in lp::tests::combinations(&idx, 7) {
            let mut mat: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let mut rhs = vec![q(0); 7];
            mat.push(sum_r.clone());
            rhs.push(q(1));
            let Some(x) = lp::tests::solve_square(mat, rhs) else { continue };
            let feasible = rows.iter().all(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<Q>() >= q(0));
            if feasible {
                let v = objective(&x);
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        let best = best.unwrap();
        assert!(best >= q(0));
        // The simplex agrees.
        let sys = LinSystem::for_dual_cone(&cone("A*")).unwrap();
        let obj: Vec<Q> = c.iter().map(|&v| q(v)).chain(m.iter().map(|&v| q(-v))).collect();
        let mut prog = LinearProgram::new(8, Sense::Minimize, obj);
        for f in &sys.constraints {
            prog.constrain(Constraint::new(LinSystem::row(f), Relation::Ge, Q::zero()));
        }
        prog.constrain(Constraint::new(sum_r, Relation::Eq, q(1)));
        match prog.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, best),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certifies_s3_violation() {
        let x = GhzDiagonal::from_i64([1, 1, 1, 1], [4, 0, 0, 0]).to_state();
        let cert = certify(&x, &cone("AvBvC")).unwrap().expect("outside the top cone");
        assert!(cert.verified && cert.verify(&x));
        assert!(cert.value.is_negative());
        // The witness is a genuine top-dual witness: W3 on its radii.
        assert!(eval_witness::<Surd>(&w("W3"), &cert.witness).holds);
    }

    #[test]
    fn rho1_certificates() {
        let x = rho([2, 0, 1, 0]);
        assert!(certify(&x, &cone("A")).unwrap().is_none());
        assert!(certify(&x, &cone("Bv(C^A)")).unwrap().is_none());
        let cert = certify(&x, &cone("(A^B)v(A^C)")).unwrap().expect("ρ1 is outside");
        assert!(cert.verify(&x));
        assert!(member::<Surd>(&cert.witness, &cone("(AvB)^(AvC)*")).unwrap().holds);
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn rejects_bad_inputs() {
        let bad = XState::from_i64([1, -1, 1, 1], [1; 4], [(0, 0); 4]);
        assert!(matches!(certify(&bad, &cone("A")), Err(Error::NegativeDiagonal(_))));
        assert!(certify(&rho([0; 4]), &cone("A*")).is_err());
    }

    #[test]
    fn lifting_handles_degenerate_and_complex_entries() {
        // a_1 = 0 < b_1 with a violating complex coherence elsewhere.
        let x = XState::from_i64([0, 2, 2, 3], [5, 1, 1, 3], [(0, 0), (1, 1), (1, -1), (0, 3)]);
        assert!(x.psd());
        for c in ConeId::all_primal() {
            let m = member::<Surd>(&x, &c).unwrap();
            let cert = certify(&x, &c).unwrap();
            assert_eq!(cert.is_some(), !m.holds, "{c}");
            if let Some(cert) = cert {
                assert!(cert.verify(&x));
                let radii = cert.witness.radii::<Surd>();
                for i in 0..4 {
                    let uhat_bound = Surd::from_q(cert.witness.u()[i].norm_sqr());
                    // |u_i|² is rational; r_i² = s_i t_i exactly
                    assert!(uhat_bound.signum() != Ordering::Less);
                    let rr = &cert.witness.s()[i] * &cert.witness.t()[i];
                    assert_eq!(radii.c[i].cmp_value(&Surd::sqrt(&rr)), Ordering::Equal);
                }
            }
        }
    }

    #[test]
    fn irrational_radii_are_certified() {
        // c = (√6, √2, √3, 1): ρ outside α∧β∧γ through its coherence z_1.
        let x = XState::from_i64([2, 1, 1, 1], [3, 2, 3, 1], [(2, 0), (1, 0), (0, 1), (1, 0)]);
        let lp: LatticeProfile<Surd> = crate::cones::lattice_profile(&x).unwrap();
        for e in &lp.entries {
            let cert = certify(&x, &e.cone).unwrap();
            assert_eq!(cert.is_some(), !e.margin.holds, "{}", e.cone);
        }
    }

    #[test]
    fn redundancy_examples() {
        let a = [w("W1[1,4]"), w("W1[2,3]")];
        for claim in ["W3", "W2[1,2]", "W2[1,3]", "W2[2,4]", "W2[3,4]", "W4[1,4]", "W4[2,3]"] {
            assert!(implies(&a, &w(claim)).holds, "{claim}");
        }
        // One form of W4b[1,2] (the one carrying 2|u_3|) follows from W1[2,3] and W4a[1,3].
        let sys = LinSystem::from_ineqs(&[w("W1[2,3]"), w("W4a[1,3]")]);
        let forms = w("W4b[1,2]").forms();
        let part: Vec<&LinForm> = forms.iter().filter(|f| f.neg[2] == 2).collect();
        assert_eq!(part.len(), 1);
        assert!(implies_form(&sys, part[0]).holds);
        assert!(!implies(&[w("W1[2,3]"), w("W4a[1,3]")], &w("W4b[1,2]")).holds);
    }

    #[test]
    fn non_implications_have_verified_counterexamples() {
        let out = implies(&[w("W3")], &w("W1[1,4]"));
        assert!(!out.holds);
        let cx = out.counterexample.unwrap();
        assert!(check_counterexample(&[w("W3")], &w("W1[1,4]"), &cx));
        // The hand-made point is also a counterexample.
        let manual = Counterexample { r: [q(0), q(1), q(1), q(0)], u: [q(1), q(0), q(0), q(1)] };
        assert!(check_counterexample(&[w("W3")], &w("W1[1,4]"), &manual));
        for (assumed, claimed) in [
            (vec![w("W1[1,4]")], w("W3")),
            (vec![w("W1[1,4]"), w("W1[2,3]")], w("W1[1,2]")),
            (vec![w("W4a[1,2]")], w("W1[1,2]")),
        ] {
            let out = implies(&assumed, &claimed);
            assert!(!out.holds);
            assert!(check_counterexample(&assumed, &claimed, out.counterexample.as_ref().unwrap()));
        }
    }

    #[test]
    fn certify_is_deterministic() {
        let x = rho([2, 1, 0, 0]);
        let a = certify(&x, &cone("(A^B)v(A^C)")).unwrap();
        let b = certify(&x, &cone("(A^B)v(A^C)")).unwrap();
        assert!(a.is_some());
        assert_eq!(a, b);
    }
}
