//! Reproduction suites over the GHZ-diagonal space: the tabulated extreme
//! rays with their extremality witnesses, and the lattice identities.

use std::collections::BTreeSet;

use crate::arith::Surd;
use crate::cones::{member, Atom, ConeId, Shape};
use crate::error::Result;
use crate::report::{Check, SuiteReport};
use crate::xcore::GhzDiagonal;

use super::{
    check_condi, conic_combination, extreme_rays, hrep, hrep_meet, join_rays, table2, verify_extreme, Extremality, Ray,
};

/// Extreme rays of `cone ∩ V`.
pub fn rays_of(cone: &ConeId) -> Result<Vec<Ray>> {
    extreme_rays(&hrep(cone)?)
}

fn listing(rays: &BTreeSet<&Ray>) -> String {
    const SHOWN: usize = 6;
    let mut parts: Vec<String> = rays.iter().take(SHOWN).map(|r| r.to_string()).collect();
    if rays.len() > SHOWN {
        parts.push(format!("and {} more", rays.len() - SHOWN));
    }
    parts.join(", ")
}

/// Set equality of two ray lists; the detail names separating rays.
pub fn compare_rays(name: impl Into<String>, left: &[Ray], right: &[Ray]) -> Check {
    let l: BTreeSet<&Ray> = left.iter().collect();
    let r: BTreeSet<&Ray> = right.iter().collect();
    let only_left: BTreeSet<&Ray> = l.difference(&r).copied().collect();
    let only_right: BTreeSet<&Ray> = r.difference(&l).copied().collect();
    let check = Check::new(name, only_left.is_empty() && only_right.is_empty());
    if check.failed() {
        let mut d = Vec::new();
        if !only_left.is_empty() {
            d.push(format!("only on the left: {}", listing(&only_left)));
        }
        if !only_right.is_empty() {
            d.push(format!("only on the right: {}", listing(&only_right)));
        }
        check.detail(d.join("; "))
    } else {
        check.found(format!("{} rays on both sides", l.len()))
    }
}

/// Extremality witnesses for every candidate of `cone`; returns how many
/// rays received a re-verified witness.
fn witness_all(cone: &ConeId, candidates: &[Ray]) -> Result<(usize, Vec<String>)> {
    let mut ok = 0;
    let mut bad = Vec::new();
    for ray in candidates {
        match verify_extreme(ray, cone)? {
            Extremality::Extreme { witness } if check_condi(&witness, ray, candidates) => ok += 1,
            _ => bad.push(ray.to_string()),
        }
    }
    Ok((ok, bad))
}

/// Options for [`table2_suite`].
#[derive(Clone, Copy, Debug)]
pub struct Table2Options {
    /// Search an extremality witness for every candidate.
    pub witnesses: bool,
    /// Also enumerate the cones without tabulated rays.
    pub others: bool,
}

impl Default for Table2Options {
    fn default() -> Table2Options {
        Table2Options { witnesses: true, others: true }
    }
}

pub fn table2_suite(opts: Table2Options) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let tabulated = table2::cones();
    for cone in &tabulated {
        let candidates = table2::candidates(cone).expect("tabulated");
        let expected = table2::expected_count(cone).expect("tabulated");
        let found = rays_of(cone)?;
        checks.push(Check::compare(format!("{cone}: candidate count"), expected, candidates.len()));
        checks.push(Check::compare(format!("{cone}: extreme ray count"), expected, found.len()));
        checks.push(compare_rays(format!("{cone}: rays equal the candidates"), &found, &candidates));
        if opts.witnesses {
            let (ok, bad) = witness_all(cone, &candidates)?;
            let mut c = Check::compare(format!("{cone}: extremality witnesses"), candidates.len(), ok);
            if !bad.is_empty() {
                c = c.detail(format!("no witness for {}", bad.join(", ")));
            }
            checks.push(c);
        }
    }
    for (cone, state, witness) in table2::published_witnesses() {
        let ray = Ray::from_ghz(&state)?;
        let candidates = table2::candidates(&cone).expect("tabulated");
        checks.push(
            Check::new(format!("{cone}: witness {witness} for {state}"), check_condi(&witness, &ray, &candidates))
                .detail("exhibited pair"),
        );
    }
    if opts.others {
        for cone in ConeId::all_primal().iter().filter(|c| !tabulated.contains(c)) {
            checks.push(Check::info(format!("{cone}: extreme ray count"), rays_of(cone)?.len()));
        }
    }
    Ok(SuiteReport::new("table2", checks))
}

fn meet_pair(x: Atom, y: Atom) -> ConeId {
    let missing = Atom::ALL.into_iter().find(|a| *a != x && *a != y).expect("two distinct atoms");
    ConeId::primal(Shape::MeetPair, missing)
}

fn join_pair(x: Atom, y: Atom) -> ConeId {
    let missing = Atom::ALL.into_iter().find(|a| *a != x && *a != y).expect("two distinct atoms");
    ConeId::primal(Shape::JoinPair, missing)
}

/// The meet of the three `x∨(y∧z)` cones.
pub fn p_cones() -> Vec<ConeId> {
    Atom::ALL.into_iter().map(|a| ConeId::primal(Shape::JoinMeet, a)).collect()
}

/// The three `x∧(y∨z)` cones whose join is Q.
pub fn q_cones() -> Vec<ConeId> {
    Atom::ALL.into_iter().map(|a| ConeId::primal(Shape::MeetJoin, a)).collect()
}

/// The two modularity counterexamples, with the `x∨(y∧z)` cone each lies in.
pub fn counterexamples() -> [(&'static str, GhzDiagonal, ConeId); 2] {
    [
        ("ρ1", GhzDiagonal::from_i64([2, 1, 1, 2], [2, 0, 1, 0]), ConeId::primal(Shape::JoinMeet, Atom::Beta)),
        ("ρ2", GhzDiagonal::from_i64([2, 1, 1, 2], [2, 1, 0, 0]), ConeId::primal(Shape::JoinMeet, Atom::Gamma)),
    ]
}

pub fn identity_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let p = p_cones();
    let q_rays: Vec<Vec<Ray>> = q_cones().iter().map(rays_of).collect::<Result<_>>()?;
    for x in Atom::ALL {
        let (y, z) = (x.next(), x.next().next());
        let xs = x.symbol();

        // (x∧y)∨(x∧z) = x∧P
        let join = join_rays(&[rays_of(&meet_pair(x, y))?, rays_of(&meet_pair(x, z))?]);
        let mut meet_cones = vec![ConeId::atom(x)];
        meet_cones.extend(p.iter().copied());
        let meet = extreme_rays(&hrep_meet(&meet_cones)?)?;
        let lhs = ConeId::primal(Shape::JoinOfMeets, x);
        checks.push(compare_rays(format!("{lhs} = {xs}∧P"), &join, &meet));
        checks.push(compare_rays(format!("{lhs}: join of generators matches its criteria"), &join, &rays_of(&lhs)?));

        // (x∨y)∧(x∨z) = x∨Q
        let meet = extreme_rays(&hrep_meet(&[join_pair(x, y), join_pair(x, z)])?)?;
        let mut parts = vec![rays_of(&ConeId::atom(x))?];
        parts.extend(q_rays.iter().cloned());
        let join = join_rays(&parts);
        let lhs = ConeId::primal(Shape::MeetOfJoins, x);
        checks.push(compare_rays(format!("{lhs} = {xs}∨Q"), &meet, &join));
        checks.push(compare_rays(format!("{lhs}: meet of criteria matches its own"), &meet, &rays_of(&lhs)?));
    }

    let alpha = ConeId::atom(Atom::Alpha);
    let jom = ConeId::primal(Shape::JoinOfMeets, Atom::Alpha);
    let jom_rays = rays_of(&jom)?;
    for (name, rho, upper) in counterexamples() {
        let x = rho.to_state();
        let coords = rho.coords();
        let by_criteria = |c: &ConeId| member::<Surd>(&x, c).map(|m| m.holds);
        let by_hrep = |c: &ConeId| hrep(c).map(|h| h.contains_q(&coords));
        for (cone, want) in [(alpha, true), (upper, true), (jom, false)] {
            let (a, b) = (by_criteria(&cone)?, by_hrep(&cone)?);
            let verdict = |h: bool| if h { "member" } else { "non-member" };
            checks.push(
                Check::new(format!("{name} {} {cone}", if want { "∈" } else { "∉" }), a == want && b == want)
                    .expected(verdict(want))
                    .found(format!("criteria: {}, polyhedron: {}", verdict(a), verdict(b))),
            );
        }
        let ray = Ray::from_ghz(&rho)?;
        checks.push(
            Check::new(
                format!("{name} is not generated by the rays of {jom}"),
                conic_combination(&ray, &jom_rays).is_none(),
            )
            .detail(format!("{name} = {rho}")),
        );
        let modular_side = hrep_meet(&[alpha, upper])?;
        checks.push(Check::new(
            format!("{name} separates {jom} from {}∧({upper})", Atom::Alpha.symbol()),
            modular_side.contains_q(&coords) && !hrep(&jom)?.contains_q(&coords),
        ));
    }
    Ok(SuiteReport::new("identities", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_comparison_reports_the_difference() {
        let a = vec![Ray::ghz([1, 0, 0, 0], [0; 4]), Ray::ghz([0, 1, 0, 0], [0; 4])];
        let b = vec![Ray::ghz([1, 0, 0, 0], [0; 4])];
        let c = compare_rays("x", &a, &b);
        assert!(c.failed());
        assert!(c.detail.unwrap().contains("only on the left"));
        assert!(!compare_rays("x", &a, &a).failed());
    }

    #[test]
    fn counterexamples_are_psd_states() {
        for (_, rho, _) in counterexamples() {
            assert!(rho.is_psd());
        }
    }
}
