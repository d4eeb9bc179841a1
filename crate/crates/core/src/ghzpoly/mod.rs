//! Exact polyhedral computation in the GHZ-diagonal space `V`, with
//! coordinates `(a_1..a_4, z_1..z_4)` standing for `X(a, a, z)`, real `z`.

pub mod dd;
pub mod suite;
pub mod table2;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Q;
use crate::cones::{cone_forms, ConeId};
use crate::error::{Error, Result};
use crate::ineq::LinForm;
use crate::witness::lp::{Constraint, LinearProgram, LpOutcome, Relation, Sense};
use crate::xcore::GhzDiagonal;

pub const DIM: usize = 8;

/// Homogeneous inequalities `row · x ≥ 0`, kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Vec<i64>>,
}

impl HPolyhedron {
    pub fn new(dim: usize, mut rows: Vec<Vec<i64>>) -> Result<HPolyhedron> {
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Input(format!("row of length {} in dimension {dim}", bad.len())));
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        rows.sort();
        rows.dedup();
        Ok(HPolyhedron { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `a_i ± z_i ≥ 0`.
    pub fn psd_base() -> HPolyhedron {
        let mut rows = Vec::new();
        for i in 0..4 {
            for sign in [1, -1] {
                let mut r = vec![0; DIM];
                r[i] = 1;
                r[4 + i] = sign;
                rows.push(r);
            }
        }
        HPolyhedron::new(DIM, rows).expect("dimension matches")
    }

    /// Expand forms `Σ pos_i a_i ≥ Σ neg_i |z_i|` over the signs of `z` on the
    /// negative support, together with the PSD base.
    pub fn from_forms(forms: &[LinForm]) -> HPolyhedron {
        let mut rows = HPolyhedron::psd_base().rows;
        for f in forms {
            let support: Vec<usize> = (0..4).filter(|&i| f.neg[i] != 0).collect();
            for mask in 0..(1u32 << support.len()) {
                let mut r = vec![0; DIM];
                r[..4].copy_from_slice(&f.pos);
                for (k, &i) in support.iter().enumerate() {
                    let sign = if mask >> k & 1 == 1 { 1 } else { -1 };
                    r[4 + i] = sign * f.neg[i];
                }
                rows.push(r);
            }
        }
        HPolyhedron::new(DIM, rows).expect("dimension matches")
    }

    /// Intersection.
    pub fn meet(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::Input("dimension mismatch".into()));
        }
        HPolyhedron::new(self.dim, self.rows.iter().chain(&other.rows).cloned().collect())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|r| dd::dot(r, x).map(|v| v >= 0).unwrap_or(false))
    }

    pub fn contains_q(&self, x: &[Q]) -> bool {
        self.rows.iter().all(|r| {
            let s: Q = r.iter().zip(x).map(|(&c, v)| v * &Q::from_i64(c)).sum();
            !s.is_negative()
        })
    }

    /// Rows vanishing at `x`.
    pub fn tight_rows(&self, x: &[i64]) -> Vec<&[i64]> {
        self.rows.iter().filter(|r| matches!(dd::dot(r, x), Ok(0))).map(|r| r.as_slice()).collect()
    }

    /// A nonzero member is extreme iff its tight rows have rank `dim − 1`.
    pub fn is_extreme(&self, x: &[i64]) -> bool {
        x.iter().any(|&v| v != 0) && self.contains(x) && dd::rank(&self.tight_rows(x), self.dim) == self.dim - 1
    }
}

/// `hrep` of a primal cone restricted to `V`.
pub fn hrep(cone: &ConeId) -> Result<HPolyhedron> {
    if cone.is_dual() {
        return Err(Error::Input(format!("{cone} is a dual cone; only primal cones are H-represented")));
    }
    Ok(HPolyhedron::from_forms(cone_forms(cone)))
}

/// Intersection of several primal cones restricted to `V`.
pub fn hrep_meet(cones: &[ConeId]) -> Result<HPolyhedron> {
    let mut forms = Vec::new();
    for c in cones {
        hrep(c)?;
        forms.extend_from_slice(cone_forms(c));
    }
    Ok(HPolyhedron::from_forms(&forms))
}

/// A primitive integer generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ray(Vec<i64>);

impl Ray {
    pub fn new(mut coords: Vec<i64>) -> Result<Ray> {
        if coords.iter().all(|&x| x == 0) {
            return Err(Error::Input("zero vector is not a ray".into()));
        }
        dd::primitive(&mut coords);
        Ok(Ray(coords))
    }

    pub fn ghz(a: [i64; 4], z: [i64; 4]) -> Ray {
        Ray::new(a.iter().chain(&z).copied().collect()).expect("nonzero")
    }

    pub fn from_ghz(g: &GhzDiagonal) -> Result<Ray> {
        Ray::new(dd::to_primitive_ints(&g.coords())?)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_ghz(&self) -> GhzDiagonal {
        let q: Vec<Q> = self.0.iter().map(|&x| Q::from_i64(x)).collect();
        GhzDiagonal::from_coords(&q)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == DIM {
            return write!(f, "{}", self.to_ghz());
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Extreme rays of a pointed cone, canonically sorted.
pub fn extreme_rays(p: &HPolyhedron) -> Result<Vec<Ray>> {
    let order: Vec<usize> = (0..p.rows.len()).collect();
    extreme_rays_with_order(p, &order)
}

/// Extreme rays with the constraints inserted in a custom order.
pub fn extreme_rays_with_order(p: &HPolyhedron, order: &[usize]) -> Result<Vec<Ray>> {
    let rows: Vec<Vec<i64>> = order.iter().map(|&i| p.rows[i].clone()).collect();
    let mut rays = dd::double_description(p.dim, &rows)?.into_iter().map(Ray::new).collect::<Result<Vec<_>>>()?;
    rays.sort();
    for r in &rays {
        if !p.is_extreme(&r.0) {
            return Err(Error::InternalConsistency(format!("enumerated ray {r} fails the rank test")));
        }
    }
    Ok(rays)
}

fn ghz_pair(w: &[Q], x: &[i64]) -> Q {
    // Half of the GHZ pairing: Σ s_i a_i + u_i z_i.
    w.iter().zip(x).map(|(c, &v)| c * &Q::from_i64(v)).sum()
}

/// Outcome of the extremality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremality {
    /// A witness vanishing on the ray and positive on every other candidate.
    Extreme { witness: GhzDiagonal },
    /// The ray is a nonnegative combination of other candidates.
    NotExtreme { decomposition: Vec<(Q, Ray)> },
}

/// Whether `w` satisfies the extremality condition for `ray` among `candidates`.
pub fn check_condi(w: &GhzDiagonal, ray: &Ray, candidates: &[Ray]) -> bool {
    let ray_ghz = ray.to_ghz();
    w.pair(&ray_ghz).is_zero() && candidates.iter().filter(|c| *c != ray).all(|c| w.pair(&c.to_ghz()).is_positive())
}

/// Search a witness `W ∈ V` with `⟨W, ray⟩ = 0` and `⟨W, ψ⟩ > 0` for every
/// other candidate: maximize the smallest slack `t` over `Σ s = 1`, `s ≥ 0`,
/// `|u_i| ≤ 4`.
pub fn condi_witness(ray: &Ray, candidates: &[Ray]) -> Result<Extremality> {
    if ray.0.len() != DIM {
        return Err(Error::Input("condition test runs in the GHZ-diagonal space".into()));
    }
    // Variables: s_1..s_4, u_1..u_4 (free), t (free).
    let mut obj = vec![Q::zero(); 9];
    obj[8] = Q::one();
    let mut lp = LinearProgram::new(9, Sense::Maximize, obj);
    for k in 4..9 {
        lp.set_free(k);
    }
    let others: Vec<&Ray> = candidates.iter().filter(|c| *c != ray).collect();
    for psi in &others {
        let mut row: Vec<Q> = psi.0.iter().map(|&x| Q::from_i64(x)).collect();
        row.push(Q::from_i64(-1));
        lp.constrain(Constraint::new(row, Relation::Ge, Q::zero()));
    }
    let mut row: Vec<Q> = ray.0.iter().map(|&x| Q::from_i64(x)).collect();
    row.push(Q::zero());
    lp.constrain(Constraint::new(row, Relation::Eq, Q::zero()));
    lp.constrain(Constraint::from_i64(&[1, 1, 1, 1, 0, 0, 0, 0, 0], Relation::Eq, 1));
    for k in 4..8 {
        let mut e = vec![0; 9];
        e[k] = 1;
        lp.constrain(Constraint::from_i64(&e, Relation::Le, 4));
        lp.constrain(Constraint::from_i64(&e, Relation::Ge, -4));
    }
    if let LpOutcome::Optimal { value, x } = lp.solve() {
        if value.is_positive() {
            let ints = dd::to_primitive_ints(&x[..8])?;
            let w = GhzDiagonal::from_coords(&ints.iter().map(|&v| Q::from_i64(v)).collect::<Vec<_>>());
            let others_ok = others.iter().all(|psi| ghz_pair(&x[..8], &psi.0).is_positive());
            if !(others_ok && check_condi(&w, ray, candidates)) {
                return Err(Error::InternalConsistency(format!("witness for {ray} fails re-verification")));
            }
            return Ok(Extremality::Extreme { witness: w });
        }
    }
    let others: Vec<Ray> = others.into_iter().cloned().collect();
    match conic_combination(ray, &others) {
        Some(decomposition) => Ok(Extremality::NotExtreme { decomposition }),
        None => Err(Error::InternalConsistency(format!(
            "{ray} has no extremality witness yet is not generated by the other candidates"
        ))),
    }
}

/// Extremality of `ray` in a primal cone restricted to `V`, against the
/// cone's extreme rays (the tabulated candidates where they exist).
pub fn verify_extreme(ray: &Ray, cone: &ConeId) -> Result<Extremality> {
    let p = hrep(cone)?;
    if ray.0.len() != DIM || !p.contains(&ray.0) {
        return Err(Error::Input(format!("{ray} is not in {cone}")));
    }
    let candidates = match table2::candidates(cone) {
        Some(c) => c,
        None => extreme_rays(&p)?,
    };
    condi_witness(ray, &candidates)
}

/// Nonnegative weights expressing `target` through `gens`, if any.
pub fn conic_combination(target: &Ray, gens: &[Ray]) -> Option<Vec<(Q, Ray)>> {
    if gens.is_empty() {
        return None;
    }
    let dim = target.0.len();
    let mut lp = LinearProgram::new(gens.len(), Sense::Minimize, vec![Q::zero(); gens.len()]);
    for j in 0..dim {
        let row: Vec<Q> = gens.iter().map(|g| Q::from_i64(g.0[j])).collect();
        lp.constrain(Constraint::new(row, Relation::Eq, Q::from_i64(target.0[j])));
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            Some(x.into_iter().zip(gens).filter(|(w, _)| !w.is_zero()).map(|(w, g)| (w, g.clone())).collect())
        }
        _ => None,
    }
}

/// Remove generators that are nonnegative combinations of the others,
/// leaving the extreme rays of the generated cone.
pub fn reduce_generators(gens: &[Ray]) -> Vec<Ray> {
    let mut kept: Vec<Ray> = gens.to_vec();
    kept.sort();
    kept.dedup();
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Ray> = kept.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, r)| r.clone()).collect();
        if conic_combination(&kept[i], &others).is_some() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Extreme rays of the join (conic hull of the union) of cones given by
/// their generators.
pub fn join_rays(parts: &[Vec<Ray>]) -> Vec<Ray> {
    let all: Vec<Ray> = parts.iter().flatten().cloned().collect();
    reduce_generators(&all)
}
