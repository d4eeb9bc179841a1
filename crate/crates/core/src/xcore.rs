//! X-shaped and GHZ-diagonal three-qubit matrices.
//!
//! Basis index `x ∈ 0..8` is the bit string of the three parties with A as
//! the most significant bit. The X-shaped matrix `X(a, b, z)` has
//! `a_i = M[i][i]`, `b_i = M[7−i][7−i]` and `z_i = M[i][7−i]` for `i ∈ 0..4`.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::arith::{Real, CQ, Q};
use crate::error::{Error, Result};

/// Default relative tolerance for float-mode verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Self-adjoint matrix supported on the diagonal and anti-diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XMatrix {
    pub a: [Q; 4],
    pub b: [Q; 4],
    pub z: [CQ; 4],
}

impl XMatrix {
    pub fn zero() -> XMatrix {
        XMatrix { a: Default::default(), b: Default::default(), z: Default::default() }
    }

    pub fn from_i64(a: [i64; 4], b: [i64; 4], z: [(i64, i64); 4]) -> XMatrix {
        XMatrix { a: a.map(Q::from_i64), b: b.map(Q::from_i64), z: z.map(|(re, im)| CQ::from_i64(re, im)) }
    }

    /// Rejects NaN and infinite entries.
    pub fn from_f64(a: [f64; 4], b: [f64; 4], z: [(f64, f64); 4]) -> Result<XMatrix> {
        let conv = |x: f64| Q::from_f64(x).ok_or_else(|| Error::Input(format!("non-finite entry {x}")));
        let mut m = XMatrix::zero();
        for i in 0..4 {
            m.a[i] = conv(a[i])?;
            m.b[i] = conv(b[i])?;
            m.z[i] = CQ::new(conv(z[i].0)?, conv(z[i].1)?);
        }
        Ok(m)
    }

    /// `a_i, b_i ≥ 0` and `a_i b_i ≥ |z_i|²` for every block.
    pub fn is_psd(&self) -> bool {
        (0..4).all(|i| {
            !self.a[i].is_negative() && !self.b[i].is_negative() && &self.a[i] * &self.b[i] >= self.z[i].norm_sqr()
        })
    }

    pub fn to_dense(&self) -> DenseHermitian8 {
        let mut m = DenseHermitian8::zero();
        for i in 0..4 {
            m.entries[i][i] = CQ::real(self.a[i].clone());
            m.entries[7 - i][7 - i] = CQ::real(self.b[i].clone());
            m.entries[i][7 - i] = self.z[i].clone();
            m.entries[7 - i][i] = self.z[i].conj();
        }
        m
    }

    /// `Tr(x yᵗ) = Σ a a' + b b' + 2 Re(z z')`.
    pub fn pair(&self, other: &XMatrix) -> Q {
        let mut acc = Q::zero();
        for i in 0..4 {
            acc = acc + &self.a[i] * &other.a[i] + &self.b[i] * &other.b[i];
            let re = &(&self.z[i] * &other.z[i]).re;
            acc = acc + re + re;
        }
        acc
    }

    /// Conjugation by the local unitary flipping every qubit: `X(b, a, z̄)`.
    pub fn flip(&self) -> XMatrix {
        XMatrix { a: self.b.clone(), b: self.a.clone(), z: self.z.clone().map(|z| z.conj()) }
    }

    /// `(M + flip(M)) / 2 = X((a+b)/2, (a+b)/2, Re z)`.
    pub fn ghz_sym(&self) -> GhzDiagonal {
        let half = Q::new(1, 2);
        GhzDiagonal {
            a: std::array::from_fn(|i| (&self.a[i] + &self.b[i]) * &half),
            z: std::array::from_fn(|i| self.z[i].re.clone()),
        }
    }

    /// Conjugation by the permutation unitary of `g`, via the derived index table.
    pub fn act(&self, g: &PartyOp) -> XMatrix {
        let mut out = XMatrix::zero();
        for (i, (j, swapped)) in g.index_table().into_iter().enumerate() {
            if swapped {
                out.a[j] = self.b[i].clone();
                out.b[j] = self.a[i].clone();
                out.z[j] = self.z[i].conj();
            } else {
                out.a[j] = self.a[i].clone();
                out.b[j] = self.b[i].clone();
                out.z[j] = self.z[i].clone();
            }
        }
        out
    }
}

impl fmt::Display for XMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[String]| v.join(" ");
        write!(
            f,
            "X(({}), ({}), ({}))",
            join(&self.a.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
            join(&self.b.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
            join(&self.z.iter().map(|q| q.to_string()).collect::<Vec<_>>()),
        )
    }
}

/// An X-shaped state candidate. Non-psd input is accepted and flagged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XState {
    m: XMatrix,
    psd: bool,
}

impl XState {
    pub fn new(m: XMatrix) -> XState {
        let psd = m.is_psd();
        XState { m, psd }
    }

    pub fn from_i64(a: [i64; 4], b: [i64; 4], z: [(i64, i64); 4]) -> XState {
        XState::new(XMatrix::from_i64(a, b, z))
    }

    pub fn psd(&self) -> bool {
        self.psd
    }

    pub fn matrix(&self) -> &XMatrix {
        &self.m
    }

    pub fn a(&self) -> &[Q; 4] {
        &self.m.a
    }

    pub fn b(&self) -> &[Q; 4] {
        &self.m.b
    }

    pub fn z(&self) -> &[CQ; 4] {
        &self.m.z
    }

    /// `c_i = √(a_i b_i)`, `m_i = |z_i|`.
    pub fn profile<S: Real>(&self) -> Result<Profile<S>> {
        for i in 0..4 {
            if self.m.a[i].is_negative() {
                return Err(Error::NegativeDiagonal(i + 1));
            }
            if self.m.b[i].is_negative() {
                return Err(Error::NegativeDiagonal(8 - i));
            }
        }
        Ok(Profile {
            c: std::array::from_fn(|i| S::sqrt_q(&(&self.m.a[i] * &self.m.b[i]))),
            m: std::array::from_fn(|i| S::sqrt_q(&self.m.z[i].norm_sqr())),
            tol: DEFAULT_TOLERANCE,
        })
    }

    pub fn act(&self, g: &PartyOp) -> XState {
        XState { m: self.m.act(g), psd: self.psd }
    }

    pub fn ghz_sym(&self) -> GhzDiagonal {
        self.m.ghz_sym()
    }
}

/// An X-shaped witness `X(s, t, u)` with `s, t ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WitnessParts", into = "WitnessParts")]
pub struct WitnessX {
    m: XMatrix,
}

#[derive(Serialize, Deserialize)]
struct WitnessParts {
    s: [Q; 4],
    t: [Q; 4],
    u: [CQ; 4],
}

impl TryFrom<WitnessParts> for WitnessX {
    type Error = Error;
    fn try_from(p: WitnessParts) -> Result<WitnessX> {
        WitnessX::new(XMatrix { a: p.s, b: p.t, z: p.u })
    }
}

impl From<WitnessX> for WitnessParts {
    fn from(w: WitnessX) -> WitnessParts {
        WitnessParts { s: w.m.a, t: w.m.b, u: w.m.z }
    }
}

impl WitnessX {
    pub fn new(m: XMatrix) -> Result<WitnessX> {
        for i in 0..4 {
            if m.a[i].is_negative() {
                return Err(Error::NegativeDiagonal(i + 1));
            }
            if m.b[i].is_negative() {
                return Err(Error::NegativeDiagonal(8 - i));
            }
        }
        Ok(WitnessX { m })
    }

    pub fn from_i64(s: [i64; 4], t: [i64; 4], u: [(i64, i64); 4]) -> Result<WitnessX> {
        WitnessX::new(XMatrix::from_i64(s, t, u))
    }

    pub fn matrix(&self) -> &XMatrix {
        &self.m
    }

    pub fn s(&self) -> &[Q; 4] {
        &self.m.a
    }

    pub fn t(&self) -> &[Q; 4] {
        &self.m.b
    }

    pub fn u(&self) -> &[CQ; 4] {
        &self.m.z
    }

    /// Radii `r_i = √(s_i t_i)` in `c` and magnitudes `|u_i|` in `m`.
    pub fn radii<S: Real>(&self) -> Profile<S> {
        Profile {
            c: std::array::from_fn(|i| S::sqrt_q(&(&self.m.a[i] * &self.m.b[i]))),
            m: std::array::from_fn(|i| S::sqrt_q(&self.m.z[i].norm_sqr())),
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn flip(&self) -> WitnessX {
        WitnessX { m: self.m.flip() }
    }

    pub fn act(&self, g: &PartyOp) -> WitnessX {
        WitnessX { m: self.m.act(g) }
    }

    pub fn ghz_sym(&self) -> GhzDiagonal {
        self.m.ghz_sym()
    }
}

/// `⟨W, ρ⟩ = Tr(W ρᵗ)`.
pub fn pair(w: &WitnessX, rho: &XState) -> Q {
    w.m.pair(&rho.m)
}

/// Magnitude data consumed by the inequality families.
///
/// For states `c` holds `√(a_i b_i)` and `m` holds `|z_i|`; for witnesses the
/// same slots hold the radii `√(s_i t_i)` and `|u_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile<S> {
    pub c: [S; 4],
    pub m: [S; 4],
    /// Relative tolerance used by float verdicts.
    pub tol: f64,
}

impl<S: Real> Profile<S> {
    pub fn new(c: [S; 4], m: [S; 4]) -> Profile<S> {
        Profile { c, m, tol: DEFAULT_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Profile<S> {
        self.tol = tol;
        self
    }

    /// `max(Σc, Σm, 1)` as a float, the reference size for tolerances.
    pub fn scale(&self) -> f64 {
        let sc: f64 = self.c.iter().map(|x| x.to_f64()).sum();
        let sm: f64 = self.m.iter().map(|x| x.to_f64()).sum();
        sc.max(sm).max(1.0)
    }
}

/// Dense 8×8 self-adjoint matrix with exact complex entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseHermitian8 {
    entries: [[CQ; 8]; 8],
}

impl DenseHermitian8 {
    pub fn zero() -> DenseHermitian8 {
        DenseHermitian8 { entries: Default::default() }
    }

    /// Rejects input that is not exactly self-adjoint.
    pub fn new(entries: [[CQ; 8]; 8]) -> Result<DenseHermitian8> {
        for r in 0..8 {
            for c in r..8 {
                if entries[r][c] != entries[c][r].conj() {
                    return Err(Error::NotHermitian { row: r + 1, col: c + 1 });
                }
            }
        }
        Ok(DenseHermitian8 { entries })
    }

    /// Accepts float entries self-adjoint up to `tol` (relative to the largest
    /// entry) and symmetrizes them.
    pub fn from_f64(entries: [[(f64, f64); 8]; 8], tol: f64) -> Result<DenseHermitian8> {
        let size = entries.iter().flatten().map(|(re, im)| re.abs().max(im.abs())).fold(1.0, f64::max);
        let mut out: [[CQ; 8]; 8] = Default::default();
        for r in 0..8 {
            for c in 0..8 {
                let (re, im) = entries[r][c];
                let (re2, im2) = entries[c][r];
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::Input(format!("non-finite entry at ({}, {})", r + 1, c + 1)));
                }
                if (re - re2).abs() > tol * size || (im + im2).abs() > tol * size {
                    return Err(Error::NotHermitian { row: r + 1, col: c + 1 });
                }
                let q = |x: f64| Q::from_f64(x).expect("finite");
                out[r][c] = CQ::new((q(re) + q(re2)) * Q::new(1, 2), (q(im) - q(im2)) * Q::new(1, 2));
            }
        }
        Ok(DenseHermitian8 { entries: out })
    }

    pub fn entry(&self, row: usize, col: usize) -> &CQ {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[[CQ; 8]; 8] {
        &self.entries
    }

    /// The X-part: diagonal and anti-diagonal entries.
    pub fn xpart(&self) -> XState {
        XState::new(XMatrix {
            a: std::array::from_fn(|i| self.entries[i][i].re.clone()),
            b: std::array::from_fn(|i| self.entries[7 - i][7 - i].re.clone()),
            z: std::array::from_fn(|i| self.entries[i][7 - i].clone()),
        })
    }

    /// `Tr(x yᵗ) = Σ x_{ij} y_{ij}`; real for self-adjoint arguments.
    pub fn pair(&self, other: &DenseHermitian8) -> Q {
        let mut acc = Q::zero();
        for r in 0..8 {
            for c in 0..8 {
                acc = acc + (&self.entries[r][c] * &other.entries[r][c]).re;
            }
        }
        acc
    }

    /// `U M U*` for the permutation unitary `U|x⟩ = |g(x)⟩`.
    pub fn conjugate(&self, g: &PartyOp) -> DenseHermitian8 {
        let mut out = DenseHermitian8::zero();
        for x in 0..8 {
            for y in 0..8 {
                out.entries[g.apply(x)][g.apply(y)] = self.entries[x][y].clone();
            }
        }
        out
    }

    pub fn ghz_sym(&self) -> GhzDiagonal {
        self.xpart().ghz_sym()
    }
}

/// GHZ-diagonal matrix `X(a, a, z)` with real `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GhzDiagonal {
    pub a: [Q; 4],
    pub z: [Q; 4],
}

impl GhzDiagonal {
    pub fn from_i64(a: [i64; 4], z: [i64; 4]) -> GhzDiagonal {
        GhzDiagonal { a: a.map(Q::from_i64), z: z.map(Q::from_i64) }
    }

    pub fn to_matrix(&self) -> XMatrix {
        XMatrix { a: self.a.clone(), b: self.a.clone(), z: self.z.clone().map(CQ::real) }
    }

    pub fn to_state(&self) -> XState {
        XState::new(self.to_matrix())
    }

    pub fn to_witness(&self) -> Result<WitnessX> {
        WitnessX::new(self.to_matrix())
    }

    /// `2 Σ (a_i a'_i + z_i z'_i)`, the pairing of the two X matrices.
    pub fn pair(&self, other: &GhzDiagonal) -> Q {
        let s: Q = (0..4).map(|i| &self.a[i] * &other.a[i] + &self.z[i] * &other.z[i]).sum();
        &s + &s
    }

    pub fn is_psd(&self) -> bool {
        (0..4).all(|i| self.a[i] >= self.z[i].abs())
    }

    /// Coordinates `(a_1..a_4, z_1..z_4)`.
    pub fn coords(&self) -> [Q; 8] {
        std::array::from_fn(|k| if k < 4 { self.a[k].clone() } else { self.z[k - 4].clone() })
    }

    pub fn from_coords(v: &[Q]) -> GhzDiagonal {
        GhzDiagonal { a: std::array::from_fn(|i| v[i].clone()), z: std::array::from_fn(|i| v[i + 4].clone()) }
    }
}

impl fmt::Display for GhzDiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|q| q.to_string()).collect();
        let z: Vec<String> = self.z.iter().map(|q| q.to_string()).collect();
        write!(f, "X({} / {})", a.join(" "), z.join(" "))
    }
}

/// The three parties of the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Party {
        Party::ALL[i]
    }

    fn bit(self) -> usize {
        2 - self.index()
    }
}

/// A party permutation followed by bit flips: `g(x) = P(x) ⊕ flips`.
///
/// `perm[q]` is the slot that party `q` is moved to; `flips` is a basis-index
/// mask (bit 2 = A). Together these form a group of order 48 that preserves
/// X-shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartyOp {
    perm: [u8; 3],
    flips: u8,
}

const PERMUTATIONS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

static ALL_OPS: LazyLock<Vec<PartyOp>> = LazyLock::new(|| {
    PERMUTATIONS.iter().flat_map(|&perm| (0..8u8).map(move |flips| PartyOp { perm, flips })).collect()
});

impl PartyOp {
    pub fn new(perm: [usize; 3], flips: u8) -> Result<PartyOp> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p] {
                return Err(Error::Input(format!("{perm:?} is not a permutation of the three parties")));
            }
            seen[p] = true;
        }
        if flips > 7 {
            return Err(Error::Input(format!("flip mask {flips} out of range")));
        }
        Ok(PartyOp { perm: perm.map(|p| p as u8), flips })
    }

    pub fn identity() -> PartyOp {
        PartyOp { perm: [0, 1, 2], flips: 0 }
    }

    /// Exchange two parties.
    pub fn swap(p: Party, q: Party) -> PartyOp {
        let mut perm = [0u8, 1, 2];
        perm.swap(p.index(), q.index());
        PartyOp { perm, flips: 0 }
    }

    /// Bit flip on one party.
    pub fn bit_flip(p: Party) -> PartyOp {
        PartyOp { perm: [0, 1, 2], flips: 1 << p.bit() }
    }

    /// Bit flip on every party.
    pub fn flip_all() -> PartyOp {
        PartyOp { perm: [0, 1, 2], flips: 7 }
    }

    /// Pure party permutation sending party `q` to `perm[q]`.
    pub fn permutation(perm: [Party; 3]) -> Result<PartyOp> {
        PartyOp::new(perm.map(Party::index), 0)
    }

    /// All 48 group elements in a fixed order.
    pub fn all() -> &'static [PartyOp] {
        &ALL_OPS
    }

    /// The six pure permutations.
    pub fn permutations() -> impl Iterator<Item = PartyOp> {
        PERMUTATIONS.iter().map(|&perm| PartyOp { perm, flips: 0 })
    }

    pub fn perm(&self) -> [Party; 3] {
        self.perm.map(|p| Party::from_index(p as usize))
    }

    pub fn flips(&self) -> u8 {
        self.flips
    }

    fn permute_bits(&self, x: usize) -> usize {
        let mut y = 0;
        for q in Party::ALL {
            if x >> q.bit() & 1 == 1 {
                y |= 1 << Party::from_index(self.perm[q.index()] as usize).bit();
            }
        }
        y
    }

    /// Image of a basis index.
    pub fn apply(&self, x: usize) -> usize {
        self.permute_bits(x) ^ self.flips as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PartyOp) -> PartyOp {
        PartyOp {
            perm: other.perm.map(|p| self.perm[p as usize]),
            flips: (self.permute_bits(other.flips as usize) as u8) ^ self.flips,
        }
    }

    pub fn inverse(&self) -> PartyOp {
        let mut inv = [0u8; 3];
        for q in 0..3 {
            inv[self.perm[q] as usize] = q as u8;
        }
        let p = PartyOp { perm: inv, flips: 0 };
        PartyOp { perm: inv, flips: p.permute_bits(self.flips as usize) as u8 }
    }

    /// For each block `i`, the block `j` it lands in and whether the `a`/`b`
    /// roles are exchanged (which also conjugates `z`).
    pub fn index_table(&self) -> [(usize, bool); 4] {
        std::array::from_fn(|i| {
            let x = self.apply(i);
            if x < 4 {
                (x, false)
            } else {
                (7 - x, true)
            }
        })
    }

    /// Block relabeling `σ(i)`, ignoring the `a`/`b` exchange.
    pub fn block_map(&self) -> [usize; 4] {
        self.index_table().map(|(j, _)| j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_q() -> impl Strategy<Value = Q> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Q::new(n, d))
    }

    fn xmatrix() -> impl Strategy<Value = XMatrix> {
        (
            proptest::array::uniform4(small_q()),
            proptest::array::uniform4(small_q()),
            proptest::array::uniform4((small_q(), small_q())),
        )
            .prop_map(|(a, b, z)| XMatrix { a, b, z: z.map(|(re, im)| CQ::new(re, im)) })
    }

    fn dense() -> impl Strategy<Value = DenseHermitian8> {
        proptest::collection::vec((small_q(), small_q()), 64).prop_map(|v| {
            let mut e: [[CQ; 8]; 8] = Default::default();
            for r in 0..8 {
                for c in r..8 {
                    let (re, im) = v[r * 8 + c].clone();
                    let z = if r == c { CQ::real(re) } else { CQ::new(re, im) };
                    e[c][r] = z.conj();
                    e[r][c] = z;
                }
            }
            DenseHermitian8::new(e).unwrap()
        })
    }

    fn op() -> impl Strategy<Value = PartyOp> {
        (0usize..48).prop_map(|k| PartyOp::all()[k])
    }

    #[test]
    fn rho1_is_psd_and_has_expected_profile() {
        let rho = XState::from_i64([2, 1, 1, 2], [2, 1, 1, 2], [(2, 0), (0, 0), (1, 0), (0, 0)]);
        assert!(rho.psd());
        let p = rho.profile::<f64>().unwrap();
        assert_eq!(p.c, [2.0, 1.0, 1.0, 2.0]);
        assert_eq!(p.m, [2.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn psd_flag_follows_block_test() {
        assert!(XState::new(XMatrix::zero()).psd());
        assert!(!XState::from_i64([1; 4], [1; 4], [(2, 0), (0, 0), (0, 0), (0, 0)]).psd());
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(XMatrix::from_f64([f64::NAN, 0.0, 0.0, 0.0], [0.0; 4], [(0.0, 0.0); 4]).is_err());
        assert!(XMatrix::from_f64([0.0; 4], [0.0; 4], [(f64::INFINITY, 0.0); 4]).is_err());
    }

    #[test]
    fn profile_rejects_negative_diagonal() {
        let s = XState::from_i64([1, -1, 1, 1], [1; 4], [(0, 0); 4]);
        assert!(matches!(s.profile::<f64>(), Err(Error::NegativeDiagonal(2))));
    }

    #[test]
    fn ghz_pairings() {
        let w = GhzDiagonal::from_i64([0, 1, 1, 1], [0; 4]);
        assert_eq!(w.pair(&GhzDiagonal::from_i64([1, 0, 0, 0], [0; 4])), Q::zero());
        assert_eq!(w.pair(&GhzDiagonal::from_i64([1; 4], [1; 4])), Q::from_i64(6));
        let w = w.to_witness().unwrap();
        assert_eq!(pair(&w, &GhzDiagonal::from_i64([1; 4], [1; 4]).to_state()), Q::from_i64(6));
    }

    #[test]
    fn flip_example() {
        let w = WitnessX::from_i64([1, 2, 3, 4], [4, 3, 2, 1], [(0, 1), (0, 0), (0, 0), (0, 0)]).unwrap();
        let f = w.flip();
        assert_eq!(f.s(), w.t());
        assert_eq!(f.t(), w.s());
        assert_eq!(f.u()[0], CQ::from_i64(0, -1));
        assert_eq!(f.flip(), w);
        assert_eq!(w.act(&PartyOp::flip_all()), f);
    }

    #[test]
    fn ghz_sym_averages() {
        let m = XMatrix::from_i64([2, 0, 0, 0], [0; 4], [(0, 0); 4]);
        assert_eq!(m.ghz_sym(), GhzDiagonal::from_i64([1, 0, 0, 0], [0; 4]));
    }

    #[test]
    fn xpart_of_all_ones() {
        let mut e: [[CQ; 8]; 8] = Default::default();
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = CQ::from_i64(1, 0);
            }
        }
        let x = DenseHermitian8::new(e).unwrap().xpart();
        assert_eq!(x.matrix(), &XMatrix::from_i64([1; 4], [1; 4], [(1, 0); 4]));
    }

    #[test]
    fn dense_rejects_non_hermitian() {
        let mut e: [[CQ; 8]; 8] = Default::default();
        e[0][1] = CQ::from_i64(1, 0);
        assert!(matches!(DenseHermitian8::new(e), Err(Error::NotHermitian { row: 1, col: 2 })));
    }

    #[test]
    fn swap_bc_exchanges_blocks_two_and_three() {
        let m = XMatrix::from_i64([1, 2, 3, 4], [5, 6, 7, 8], [(1, 1), (2, 2), (3, 3), (4, 4)]);
        let g = PartyOp::swap(Party::B, Party::C);
        let out = m.act(&g);
        assert_eq!(out, XMatrix::from_i64([1, 3, 2, 4], [5, 7, 6, 8], [(1, 1), (3, 3), (2, 2), (4, 4)]));
        assert_eq!(out.to_dense(), m.to_dense().conjugate(&g));
    }

    #[test]
    fn group_has_48_distinct_elements() {
        let all = PartyOp::all();
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), 48);
        for g in all {
            assert_eq!(g.compose(&g.inverse()), PartyOp::identity());
            assert_eq!(g.inverse().compose(g), PartyOp::identity());
            for x in 0..8 {
                assert_eq!(g.apply(7 - x), 7 - g.apply(x));
            }
        }
    }

    proptest! {
        #[test]
        fn x_pairing_matches_dense_trace(x in xmatrix(), y in xmatrix()) {
            prop_assert_eq!(x.pair(&y), x.to_dense().pair(&y.to_dense()));
        }

        #[test]
        fn xpart_is_adjoint_for_pairing(d in dense(), x in xmatrix()) {
            prop_assert_eq!(d.xpart().matrix().pair(&x), d.pair(&x.to_dense()));
            prop_assert_eq!(d.xpart().matrix().to_dense().xpart(), d.xpart());
        }

        #[test]
        fn ghz_sym_is_idempotent_and_self_adjoint(x in xmatrix(), y in xmatrix()) {
            let gx = x.ghz_sym();
            prop_assert_eq!(gx.to_matrix().ghz_sym(), gx.clone());
            prop_assert_eq!(gx.to_matrix().pair(&y), x.pair(&y.ghz_sym().to_matrix()));
            prop_assert_eq!(x.ghz_sym(), x.flip().ghz_sym());
        }

        #[test]
        fn index_table_agrees_with_dense_conjugation(x in xmatrix(), g in op()) {
            prop_assert_eq!(x.act(&g).to_dense(), x.to_dense().conjugate(&g));
        }

        #[test]
        fn action_is_a_group_action(x in xmatrix(), g in op(), h in op()) {
            prop_assert_eq!(x.act(&h).act(&g), x.act(&g.compose(&h)));
            prop_assert_eq!(x.act(&PartyOp::identity()), x.clone());
        }

        #[test]
        fn action_preserves_psd_and_pairing(x in xmatrix(), y in xmatrix(), g in op()) {
            prop_assert_eq!(x.act(&g).is_psd(), x.is_psd());
            prop_assert_eq!(x.act(&g).pair(&y.act(&g)), x.pair(&y));
        }
    }
}
