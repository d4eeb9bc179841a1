//! Randomized property suites: duality soundness, certification
//! completeness, lattice monotonicity and symmetry, and agreement of the two
//! GHZ-diagonal membership paths.

use std::cmp::Ordering;

use crate::arith::{Real, Surd, Q};
use crate::cones::{atom_perm_of, lattice_profile, member, ConeId, LatticeProfile};
use crate::error::Result;
use crate::ghzpoly::hrep;
use crate::report::{Check, SuiteReport};
use crate::sampling::{self, Kind, Sampler};
use crate::witness::certify;
use crate::xcore::{pair, PartyOp, WitnessX, XState, DEFAULT_TOLERANCE};

pub use crate::ghzpoly::suite::{identity_suite, table2_suite, Table2Options};
pub use crate::witness::redundancy::redundancy_suite;

/// `⟨W, ρ⟩` in floating point, with the sum of absolute terms as its scale.
fn pair_f64(w: &WitnessX, x: &XState) -> (f64, f64) {
    let (wm, xm) = (w.matrix(), x.matrix());
    let mut value = 0.0;
    let mut scale = 0.0;
    for i in 0..4 {
        let terms = [
            wm.a[i].to_f64() * xm.a[i].to_f64(),
            wm.b[i].to_f64() * xm.b[i].to_f64(),
            2.0 * (wm.z[i].re.to_f64() * xm.z[i].re.to_f64() - wm.z[i].im.to_f64() * xm.z[i].im.to_f64()),
        ];
        for t in terms {
            value += t;
            scale += t.abs();
        }
    }
    (value, scale.max(1.0))
}

/// Per-cone-pair duality soundness on `pairs` random criteria-passing
/// (state, witness) pairs, in exact and float mode.
pub fn duality_suite(pairs: usize, seed: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (k, cone) in ConeId::all_primal().into_iter().enumerate() {
        let dual = cone.polar();
        let mut sampler = Sampler::new(seed.wrapping_add(k as u64));
        let mut exact_bad = 0;
        let mut float_bad = 0;
        let mut worst = f64::INFINITY;
        for _ in 0..pairs {
            let x = sampler.exact_state();
            let w = sampler.witness();
            let xs = sampling::shrink_state_into(&x, &cone)?;
            let ws = sampling::shrink_witness_into(&w, &dual)?;
            if pair(&ws, &xs).is_negative() {
                exact_bad += 1;
            }
            let xf = sampling::shrink_state_into_float(&x, &cone)?;
            let wf = sampling::shrink_witness_into_float(&w, &dual)?;
            let (v, scale) = pair_f64(&wf, &xf);
            worst = worst.min(v / scale);
            if v < -DEFAULT_TOLERANCE * scale {
                float_bad += 1;
            }
        }
        checks.push(
            Check::new(format!("({cone}, {dual}) exact"), exact_bad == 0)
                .expected("0 negative pairings")
                .found(format!("{exact_bad} of {pairs}")),
        );
        checks.push(
            Check::new(format!("({cone}, {dual}) float"), float_bad == 0)
                .expected("0 pairings below -1e-9·scale")
                .found(format!("{float_bad} of {pairs}, smallest relative pairing {worst:.3e}")),
        );
    }
    Ok(SuiteReport::new("duality", checks))
}

/// Certification agrees with membership on `states` random X-states per
/// cone, and every certificate re-verifies.
pub fn completeness_suite(states: usize, seed: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (k, cone) in ConeId::all_primal().into_iter().enumerate() {
        let mut sampler = Sampler::new(seed.wrapping_add(1000 + k as u64));
        let (mut members, mut certified, mut disagree) = (0, 0, Vec::new());
        for n in 0..states {
            // Raw samples, samples shrunk into the cone, and samples pushed
            // just past the cone's boundary.
            let raw = sampler.exact_state();
            let x = match n % 3 {
                0 => raw,
                1 => sampling::shrink_state_into(&raw, &cone)?,
                _ => {
                    let inside = sampling::shrink_state_into(&raw, &cone)?;
                    let mut m = inside.matrix().clone();
                    m.z = m.z.map(|z| z.scale(&Q::new(9, 8)));
                    let pushed = XState::new(m);
                    if pushed.psd() {
                        pushed
                    } else {
                        raw
                    }
                }
            };
            let holds = member::<Surd>(&x, &cone)?.holds;
            let cert = certify(&x, &cone)?;
            members += usize::from(holds);
            let ok = match &cert {
                None => holds,
                Some(c) => !holds && c.verified && c.verify(&x) && c.value.is_negative(),
            };
            certified += usize::from(cert.is_some());
            if !ok {
                disagree.push(n);
            }
        }
        let mut c = Check::new(format!("{cone}"), disagree.is_empty())
            .expected("certificate exactly for non-members")
            .found(format!("{members} members, {certified} verified certificates, {} disagreements", disagree.len()));
        if !disagree.is_empty() {
            c = c.detail(format!("first disagreeing samples {:?}", &disagree[..disagree.len().min(3)]));
        }
        checks.push(c);
    }
    Ok(SuiteReport::new("completeness", checks))
}

fn same_margin<S: Real>(a: &LatticeProfile<S>, b: &LatticeProfile<S>, cone: &ConeId, image: &ConeId) -> bool {
    let (ma, mb) = (a.margin(cone).expect("full profile"), b.margin(image).expect("full profile"));
    ma.holds == mb.holds && ma.slack.cmp_scalar(&mb.slack) == Ordering::Equal
}

/// Monotonicity along the diagram and covariance under every party
/// permutation plus one random element of the full symmetry group.
pub fn consistency_suite(states: usize, seed: u64) -> Result<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let group = PartyOp::all();
    let perms: Vec<PartyOp> = PartyOp::permutations().collect();
    let cones = ConeId::all_primal();
    let (mut mono_bad, mut cov_bad, mut float_states) = (0, 0, 0);
    for _ in 0..states {
        let (kind, x) = sampler.state();
        let exact = match lattice_profile::<Surd>(&x) {
            Ok(p) => p,
            Err(_) => {
                mono_bad += 1;
                continue;
            }
        };
        if kind == Kind::Float {
            float_states += 1;
            if lattice_profile::<f64>(&x).is_err() {
                mono_bad += 1;
            }
        }
        let extra = group[sampler.index(group.len())];
        for g in perms.iter().chain(std::iter::once(&extra)) {
            let perm = atom_perm_of(g);
            let image = lattice_profile::<Surd>(&x.act(g))?;
            if !cones.iter().all(|c| same_margin(&exact, &image, c, &c.permute(&perm))) {
                cov_bad += 1;
                break;
            }
        }
    }
    let checks = vec![
        Check::new("monotonicity along the diagram", mono_bad == 0)
            .expected("0 violations")
            .found(format!("{mono_bad} of {states} states ({float_states} float states also checked in float mode)")),
        Check::new("party-permutation covariance", cov_bad == 0)
            .expected("0 violations")
            .found(format!("{cov_bad} of {states} states")),
    ];
    Ok(SuiteReport::new("consistency", checks))
}

/// Criteria membership and the H-representation agree on random
/// GHZ-diagonal states, for every primal cone.
pub fn ghz_paths_suite(states: usize, seed: u64) -> Result<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let cones = ConeId::all_primal();
    let polys = cones.iter().map(hrep).collect::<Result<Vec<_>>>()?;
    let mut bad = 0;
    let mut first = None;
    for _ in 0..states {
        let g = sampler.ghz();
        let x = g.to_state();
        let coords = g.coords();
        for (c, p) in cones.iter().zip(&polys) {
            if member::<Surd>(&x, c)?.holds != p.contains_q(&coords) {
                bad += 1;
                first.get_or_insert(format!("{g} in {c}"));
            }
        }
    }
    let mut check = Check::new("criteria and polyhedron agree on GHZ-diagonal states", bad == 0)
        .expected("0 disagreements")
        .found(format!("{bad} over {states} states × {} cones", cones.len()));
    if let Some(f) = first {
        check = check.detail(f);
    }
    Ok(SuiteReport::new("ghz-paths", vec![check]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for r in [
            duality_suite(20, 1).unwrap(),
            completeness_suite(20, 2).unwrap(),
            consistency_suite(50, 3).unwrap(),
            ghz_paths_suite(50, 4).unwrap(),
        ] {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn float_pairing_matches_exact() {
        let mut s = Sampler::new(9);
        for _ in 0..20 {
            let x = s.exact_state();
            let w = s.witness();
            let (v, scale) = pair_f64(&w, &x);
            assert!((v - pair(&w, &x).to_f64()).abs() <= 1e-12 * scale);
        }
    }
}
