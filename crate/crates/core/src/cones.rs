//! The lattice of separability cones generated by the three bi-separable
//! cones α, β, γ, their duals, and the criteria characterizing X-shaped
//! members of each.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::arith::Real;
use crate::error::{Error, Result};
use crate::ineq::{min_form, IndexPair, LinForm, Margin, StateIneq, WitnessIneq};
use crate::xcore::{Party, PartyOp, Profile, WitnessX, XState};

/// One of the three bi-separable cones; `α` is separable across A|BC,
/// `β` across B|CA and `γ` across C|AB.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Alpha,
    Beta,
    Gamma,
}

impl Atom {
    pub const ALL: [Atom; 3] = [Atom::Alpha, Atom::Beta, Atom::Gamma];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Atom {
        Atom::ALL[i]
    }

    /// Cyclic successor `α → β → γ → α`.
    pub fn next(self) -> Atom {
        Atom::from_index((self.index() + 1) % 3)
    }

    pub fn party(self) -> Party {
        Party::from_index(self.index())
    }

    pub fn symbol(self) -> char {
        ['α', 'β', 'γ'][self.index()]
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C'][self.index()]
    }

    /// The two index pairs whose S1 inequalities define the atom.
    pub fn pairs(self) -> [IndexPair; 2] {
        let p = |i, j| IndexPair::new(i, j).expect("valid pair");
        match self {
            Atom::Alpha => [p(1, 4), p(2, 3)],
            Atom::Beta => [p(1, 3), p(2, 4)],
            Atom::Gamma => [p(1, 2), p(3, 4)],
        }
    }

    /// The atom whose class contains `pair`.
    pub fn of_pair(pair: IndexPair) -> Atom {
        *Atom::ALL.iter().find(|a| a.pairs().contains(&pair)).expect("every pair has a class")
    }
}

/// Permutation of the atoms: `perm[x]` is the image of atom `x`.
pub type AtomPerm = [Atom; 3];

pub const IDENTITY_PERM: AtomPerm = Atom::ALL;

fn all_atom_perms() -> Vec<AtomPerm> {
    PartyOp::permutations().map(|g| atom_perm_of(&g)).collect()
}

/// The atom permutation induced by a party operation (flips fix every atom).
pub fn atom_perm_of(g: &PartyOp) -> AtomPerm {
    g.perm().map(|p| Atom::from_index(p.index()))
}

/// The party permutation realizing an atom permutation.
pub fn party_op_of(perm: &AtomPerm) -> PartyOp {
    PartyOp::permutation(perm.map(Atom::party)).expect("atom permutations are party permutations")
}

/// Position of a cone in the lattice diagram, from bottom to top. Shapes
/// are written with a pivot atom `x` and the other two atoms `y`, `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// `α∧β∧γ`
    Bottom,
    /// `y∧z`, pivot = the missing atom
    MeetPair,
    /// `(x∧y)∨(x∧z)`
    JoinOfMeets,
    /// `x∧(y∨z)`
    MeetJoin,
    /// `x`
    Atom,
    /// `x∨(y∧z)`
    JoinMeet,
    /// `(x∨y)∧(x∨z)`
    MeetOfJoins,
    /// `y∨z`, pivot = the missing atom
    JoinPair,
    /// `α∨β∨γ`
    Top,
}

impl Shape {
    pub const ALL: [Shape; 9] = [
        Shape::Bottom,
        Shape::MeetPair,
        Shape::JoinOfMeets,
        Shape::MeetJoin,
        Shape::Atom,
        Shape::JoinMeet,
        Shape::MeetOfJoins,
        Shape::JoinPair,
        Shape::Top,
    ];

    fn has_pivot(self) -> bool {
        !matches!(self, Shape::Bottom | Shape::Top)
    }

    /// Exchange of meet and join.
    pub fn opposite(self) -> Shape {
        match self {
            Shape::Bottom => Shape::Top,
            Shape::MeetPair => Shape::JoinPair,
            Shape::JoinOfMeets => Shape::MeetOfJoins,
            Shape::MeetJoin => Shape::JoinMeet,
            Shape::Atom => Shape::Atom,
            Shape::JoinMeet => Shape::MeetJoin,
            Shape::MeetOfJoins => Shape::JoinOfMeets,
            Shape::JoinPair => Shape::MeetPair,
            Shape::Top => Shape::Bottom,
        }
    }
}

/// A cone of the lattice. With `dual` set, the same expression is read over
/// the dual atoms α°, β°, γ°.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeId {
    shape: Shape,
    pivot: Atom,
    dual: bool,
}

impl ConeId {
    pub fn new(shape: Shape, pivot: Atom, dual: bool) -> ConeId {
        let pivot = if shape.has_pivot() { pivot } else { Atom::Alpha };
        ConeId { shape, pivot, dual }
    }

    pub fn primal(shape: Shape, pivot: Atom) -> ConeId {
        ConeId::new(shape, pivot, false)
    }

    pub fn bottom() -> ConeId {
        ConeId::primal(Shape::Bottom, Atom::Alpha)
    }

    pub fn top() -> ConeId {
        ConeId::primal(Shape::Top, Atom::Alpha)
    }

    pub fn atom(x: Atom) -> ConeId {
        ConeId::primal(Shape::Atom, x)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn pivot(&self) -> Atom {
        self.pivot
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    /// The dual cone `σ°`: meets and joins exchange and atoms become dual.
    pub fn polar(&self) -> ConeId {
        ConeId::new(self.shape.opposite(), self.pivot, !self.dual)
    }

    /// The same expression over the other family of atoms.
    pub fn with_dual(&self, dual: bool) -> ConeId {
        ConeId { dual, ..*self }
    }

    /// Relabel atoms by `perm`.
    pub fn permute(&self, perm: &AtomPerm) -> ConeId {
        ConeId::new(self.shape, perm[self.pivot.index()], self.dual)
    }

    /// The 23 primal cones, bottom to top.
    pub fn all_primal() -> Vec<ConeId> {
        let mut out = Vec::with_capacity(23);
        for shape in Shape::ALL {
            if shape.has_pivot() {
                out.extend(Atom::ALL.map(|x| ConeId::primal(shape, x)));
            } else {
                out.push(ConeId::primal(shape, Atom::Alpha));
            }
        }
        out
    }

    /// The 23 dual cones, bottom to top.
    pub fn all_dual() -> Vec<ConeId> {
        ConeId::all_primal().into_iter().map(|c| c.with_dual(true)).collect()
    }

    pub fn all() -> Vec<ConeId> {
        let mut v = ConeId::all_primal();
        v.extend(ConeId::all_dual());
        v
    }

    /// Cones directly above this one in the diagram.
    pub fn covers(&self) -> Vec<ConeId> {
        let x = self.pivot;
        let (y, z) = (x.next(), x.next().next());
        let c = |shape, p| ConeId::new(shape, p, self.dual);
        match self.shape {
            Shape::Bottom => Atom::ALL.iter().map(|&p| c(Shape::MeetPair, p)).collect(),
            Shape::MeetPair => vec![c(Shape::JoinOfMeets, y), c(Shape::JoinOfMeets, z)],
            Shape::JoinOfMeets => vec![c(Shape::MeetJoin, x), c(Shape::JoinMeet, y), c(Shape::JoinMeet, z)],
            Shape::MeetJoin => vec![c(Shape::Atom, x), c(Shape::MeetOfJoins, y), c(Shape::MeetOfJoins, z)],
            Shape::Atom => vec![c(Shape::JoinMeet, x)],
            Shape::JoinMeet => vec![c(Shape::MeetOfJoins, x)],
            Shape::MeetOfJoins => vec![c(Shape::JoinPair, z), c(Shape::JoinPair, y)],
            Shape::JoinPair => vec![c(Shape::Top, x)],
            Shape::Top => vec![],
        }
    }

    /// Every cone above this one (excluding itself).
    pub fn above(&self) -> BTreeSet<ConeId> {
        let mut seen = BTreeSet::new();
        let mut stack = self.covers();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(c.covers());
            }
        }
        seen
    }

    /// `self ⊆ other` in the diagram order.
    pub fn le(&self, other: &ConeId) -> bool {
        self == other || self.above().contains(other)
    }

    fn expr(&self) -> Expr {
        let x = self.pivot;
        let (y, z) = (x.next(), x.next().next());
        let a = Expr::Atom;
        let meet = |v: Vec<Expr>| Expr::Meet(v);
        let join = |v: Vec<Expr>| Expr::Join(v);
        match self.shape {
            Shape::Bottom => meet(vec![a(Atom::Alpha), a(Atom::Beta), a(Atom::Gamma)]),
            Shape::MeetPair => meet(vec![a(y), a(z)]),
            Shape::JoinOfMeets => join(vec![meet(vec![a(x), a(y)]), meet(vec![a(x), a(z)])]),
            Shape::MeetJoin => meet(vec![a(x), join(vec![a(y), a(z)])]),
            Shape::Atom => a(x),
            Shape::JoinMeet => join(vec![a(x), meet(vec![a(y), a(z)])]),
            Shape::MeetOfJoins => meet(vec![join(vec![a(x), a(y)]), join(vec![a(x), a(z)])]),
            Shape::JoinPair => join(vec![a(y), a(z)]),
            Shape::Top => join(vec![a(Atom::Alpha), a(Atom::Beta), a(Atom::Gamma)]),
        }
    }

    /// ASCII form accepted by the expression parser, e.g. `(A^B)v(A^C)*`.
    pub fn dsl(&self) -> String {
        let mut s = String::new();
        self.expr().render(&mut s, false, true, "^", "v");
        if self.dual {
            s.push('*');
        }
        s
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.expr().render(&mut s, self.dual, false, "∧", "∨");
        f.write_str(&s)
    }
}

impl FromStr for ConeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<ConeId> {
        Ok(canonicalize(s)?.cone)
    }
}

string_serde!(ConeId);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Expr {
    Atom(Atom),
    Meet(Vec<Expr>),
    Join(Vec<Expr>),
}

impl Expr {
    fn render(&self, out: &mut String, dual: bool, ascii: bool, meet: &str, join: &str) {
        let (children, op) = match self {
            Expr::Atom(a) => {
                out.push(if ascii { a.letter() } else { a.symbol() });
                if dual {
                    out.push('°');
                }
                return;
            }
            Expr::Meet(c) => (c, meet),
            Expr::Join(c) => (c, join),
        };
        for (k, child) in children.iter().enumerate() {
            if k > 0 {
                out.push_str(op);
            }
            let wrap = !matches!(child, Expr::Atom(_));
            if wrap {
                out.push('(');
            }
            child.render(out, dual, ascii, meet, join);
            if wrap {
                out.push(')');
            }
        }
    }

    /// Flatten nested operators of the same kind, drop duplicates, sort.
    fn normalize(self) -> Expr {
        match self {
            Expr::Atom(a) => Expr::Atom(a),
            Expr::Meet(c) => Expr::flatten(c, true),
            Expr::Join(c) => Expr::flatten(c, false),
        }
    }

    fn flatten(children: Vec<Expr>, is_meet: bool) -> Expr {
        let mut out = Vec::new();
        for child in children.into_iter().map(Expr::normalize) {
            match child {
                Expr::Meet(inner) if is_meet => out.extend(inner),
                Expr::Join(inner) if !is_meet => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        if out.len() == 1 {
            return out.pop().expect("one child");
        }
        if is_meet {
            Expr::Meet(out)
        } else {
            Expr::Join(out)
        }
    }

    fn atoms_of(children: &[Expr]) -> Option<Vec<Atom>> {
        children.iter().map(|c| if let Expr::Atom(a) = c { Some(*a) } else { None }).collect()
    }

    fn missing(atoms: &[Atom]) -> Atom {
        *Atom::ALL.iter().find(|a| !atoms.contains(a)).expect("two atoms given")
    }

    /// Match against the lattice shapes.
    fn classify(&self) -> Option<(Shape, Atom)> {
        match self {
            Expr::Atom(a) => Some((Shape::Atom, *a)),
            Expr::Meet(c) | Expr::Join(c) => {
                let is_meet = matches!(self, Expr::Meet(_));
                if let Some(atoms) = Expr::atoms_of(c) {
                    return match (atoms.len(), is_meet) {
                        (3, true) => Some((Shape::Bottom, Atom::Alpha)),
                        (3, false) => Some((Shape::Top, Atom::Alpha)),
                        (2, true) => Some((Shape::MeetPair, Expr::missing(&atoms))),
                        (2, false) => Some((Shape::JoinPair, Expr::missing(&atoms))),
                        _ => None,
                    };
                }
                if c.len() != 2 {
                    return None;
                }
                // Sorted: atoms come before compound expressions.
                match (&c[0], &c[1]) {
                    (Expr::Atom(x), inner) => {
                        let pair = match (inner, is_meet) {
                            (Expr::Join(p), true) | (Expr::Meet(p), false) => Expr::atoms_of(p)?,
                            _ => return None,
                        };
                        if pair.len() != 2 || pair.contains(x) {
                            return None;
                        }
                        Some((if is_meet { Shape::MeetJoin } else { Shape::JoinMeet }, *x))
                    }
                    (l, r) => {
                        let (p, q) = match (l, r, is_meet) {
                            (Expr::Meet(p), Expr::Meet(q), false) | (Expr::Join(p), Expr::Join(q), true) => {
                                (Expr::atoms_of(p)?, Expr::atoms_of(q)?)
                            }
                            _ => return None,
                        };
                        if p.len() != 2 || q.len() != 2 {
                            return None;
                        }
                        let common: Vec<Atom> = p.iter().filter(|a| q.contains(a)).copied().collect();
                        if common.len() != 1 {
                            return None;
                        }
                        Some((if is_meet { Shape::MeetOfJoins } else { Shape::JoinOfMeets }, common[0]))
                    }
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Atom(Atom),
    Meet,
    Join,
    Open,
    Close,
    Dual,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let err = |reason: String| Error::ConeParse { expr: text.to_string(), reason };
    let mut out = Vec::new();
    for ch in text.chars() {
        out.push(match ch {
            c if c.is_whitespace() => continue,
            'A' | 'α' => Token::Atom(Atom::Alpha),
            'B' | 'β' => Token::Atom(Atom::Beta),
            'C' | 'γ' => Token::Atom(Atom::Gamma),
            '^' | '∧' => Token::Meet,
            'v' | 'V' | '∨' => Token::Join,
            '(' => Token::Open,
            ')' => Token::Close,
            '*' | '°' => Token::Dual,
            other => return Err(err(format!("unexpected character {other:?}"))),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    dual_atoms: usize,
    atoms: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::ConeParse { expr: self.text.to_string(), reason: reason.to_string() }
    }

    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn join(&mut self) -> Result<Expr> {
        let mut terms = vec![self.meet()?];
        while self.peek() == Some(Token::Join) {
            self.pos += 1;
            terms.push(self.meet()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { Expr::Join(terms) })
    }

    fn meet(&mut self) -> Result<Expr> {
        let mut terms = vec![self.factor()?];
        while self.peek() == Some(Token::Meet) {
            self.pos += 1;
            terms.push(self.factor()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { Expr::Meet(terms) })
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Atom(a)) => {
                self.pos += 1;
                self.atoms += 1;
                if self.peek() == Some(Token::Dual) {
                    self.pos += 1;
                    self.dual_atoms += 1;
                }
                Ok(Expr::Atom(a))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let e = self.join()?;
                if self.peek() != Some(Token::Close) {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => Err(self.err("expected an atom or '('")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Result of [`canonicalize`]: the cone named, the representative of its
/// symmetry class, and the atom permutation carrying the representative to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub cone: ConeId,
    pub representative: ConeId,
    pub perm: AtomPerm,
}

/// Representative pivot of each shape under atom relabeling.
fn representative_pivot(shape: Shape) -> Atom {
    match shape {
        // α∧β and α∨β
        Shape::MeetPair | Shape::JoinPair => Atom::Gamma,
        _ => Atom::Alpha,
    }
}

/// Parse a lattice expression over `A`, `B`, `C` (or `α`, `β`, `γ`) with `^`
/// for meet, `v` for join, parentheses, and a trailing `*` (or `°` on every
/// atom) for the dual family.
pub fn canonicalize(text: &str) -> Result<Canonical> {
    let tokens = tokenize(text)?;
    let n = tokens.len();
    // A final marker directly after ')' applies to the whole expression.
    let after_close = n >= 2 && tokens[n - 1] == Token::Dual && tokens[n - 2] == Token::Close;
    let body_len = n - usize::from(after_close);
    let mut p = Parser { text, tokens: tokens[..body_len].to_vec(), pos: 0, dual_atoms: 0, atoms: 0 };
    let expr = p.join()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("unexpected trailing input"));
    }
    // A final marker on the last atom is also read as applying to the whole
    // expression when no other atom carries one, as in "AvB*".
    let final_on_atom = !after_close && n >= 2 && tokens[n - 1] == Token::Dual;
    let dual = if after_close {
        if p.dual_atoms > 0 {
            return Err(p.err("mixed dual markers"));
        }
        true
    } else if p.dual_atoms == 0 || p.dual_atoms == p.atoms || (final_on_atom && p.dual_atoms == 1) {
        p.dual_atoms > 0
    } else {
        return Err(p.err("either every atom or none must be dual"));
    };
    let (shape, pivot) = expr.normalize().classify().ok_or_else(|| Error::UnknownCone(text.to_string()))?;
    let cone = ConeId::new(shape, pivot, dual);
    let representative = ConeId::new(shape, representative_pivot(shape), dual);
    let perm = all_atom_perms()
        .into_iter()
        .filter(|perm| representative.permute(perm) == cone)
        .min()
        .expect("the symmetric group acts transitively on pivots");
    Ok(Canonical { cone, representative, perm })
}

/// Criteria characterizing X-shaped members of a cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "inequalities", rename_all = "lowercase")]
pub enum CriteriaSet {
    State(Vec<StateIneq>),
    Witness(Vec<WitnessIneq>),
}

impl CriteriaSet {
    pub fn forms(&self) -> Vec<LinForm> {
        let mut out: Vec<LinForm> = match self {
            CriteriaSet::State(v) => v.iter().flat_map(|i| i.forms()).collect(),
            CriteriaSet::Witness(v) => v.iter().flat_map(|i| i.forms()).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn names(&self) -> Vec<String> {
        match self {
            CriteriaSet::State(v) => v.iter().map(|i| i.to_string()).collect(),
            CriteriaSet::Witness(v) => v.iter().map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CriteriaSet::State(v) => v.len(),
            CriteriaSet::Witness(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn map(&self, sigma: &[usize; 4]) -> CriteriaSet {
        match self {
            CriteriaSet::State(v) => CriteriaSet::State(v.iter().map(|i| i.map(sigma)).collect()),
            CriteriaSet::Witness(v) => CriteriaSet::Witness(v.iter().map(|i| i.map(sigma)).collect()),
        }
    }

    /// Order- and presentation-independent key for comparing sets.
    fn key(&self) -> BTreeSet<String> {
        match self {
            CriteriaSet::State(v) => v.iter().map(|i| i.canonical().to_string()).collect(),
            CriteriaSet::Witness(v) => v.iter().map(|i| i.to_string()).collect(),
        }
    }
}

// `S4[*]`, `W2[*]` and `W4[*]` stand for the instance over every distinct
// pair (of pairs).
const PRIMAL_TABLE: &[(&str, &[&str])] = &[
    ("α∧β∧γ", &["S1[1,2]", "S1[1,3]", "S1[1,4]", "S1[2,3]", "S1[2,4]", "S1[3,4]"]),
    ("β∧γ", &["S1[1,3]", "S1[2,4]", "S1[1,2]", "S1[3,4]"]),
    ("γ∧α", &["S1[1,2]", "S1[3,4]", "S1[1,4]", "S1[2,3]"]),
    ("α∧β", &["S1[1,4]", "S1[2,3]", "S1[1,3]", "S1[2,4]"]),
    ("(α∧β)∨(α∧γ)", &["S1[1,4]", "S1[2,3]", "S4[*]"]),
    ("(β∧γ)∨(β∧α)", &["S1[1,3]", "S1[2,4]", "S4[*]"]),
    ("(γ∧α)∨(γ∧β)", &["S1[1,2]", "S1[3,4]", "S4[*]"]),
    ("α∧(β∨γ)", &["S1[1,4]", "S1[2,3]", "S2[1,4]"]),
    ("β∧(γ∨α)", &["S1[1,3]", "S1[2,4]", "S2[1,3]"]),
    ("γ∧(α∨β)", &["S1[1,2]", "S1[3,4]", "S2[1,2]"]),
    ("α", &["S1[1,4]", "S1[2,3]"]),
    ("β", &["S1[1,3]", "S1[2,4]"]),
    ("γ", &["S1[1,2]", "S1[3,4]"]),
    ("α∨(β∧γ)", &["S4[1,2|1,3]", "S4[1,2|2,4]", "S4[1,2|3,4]", "S4[1,3|2,4]", "S4[1,3|3,4]", "S4[2,4|3,4]"]),
    ("β∨(γ∧α)", &["S4[1,2|1,4]", "S4[1,2|2,3]", "S4[1,2|3,4]", "S4[1,4|2,3]", "S4[1,4|3,4]", "S4[2,3|3,4]"]),
    ("γ∨(α∧β)", &["S4[1,3|1,4]", "S4[1,3|2,3]", "S4[1,3|2,4]", "S4[1,4|2,3]", "S4[1,4|2,4]", "S4[2,3|2,4]"]),
    ("(α∨β)∧(α∨γ)", &["S2[1,2]", "S2[1,3]"]),
    ("(β∨γ)∧(β∨α)", &["S2[1,4]", "S2[1,2]"]),
    ("(γ∨α)∧(γ∨β)", &["S2[1,3]", "S2[1,4]"]),
    ("β∨γ", &["S2[1,4]"]),
    ("γ∨α", &["S2[1,3]"]),
    ("α∨β", &["S2[1,2]"]),
    ("α∨β∨γ", &["S3"]),
];

const DUAL_TABLE: &[(&str, &[&str])] = &[
    ("α°∧β°∧γ°", &["W1[1,2]", "W1[1,3]", "W1[1,4]", "W1[2,3]", "W1[2,4]", "W1[3,4]"]),
    ("β°∧γ°", &["W1[1,3]", "W1[2,4]", "W1[1,2]", "W1[3,4]"]),
    ("γ°∧α°", &["W1[1,2]", "W1[3,4]", "W1[1,4]", "W1[2,3]"]),
    ("α°∧β°", &["W1[1,4]", "W1[2,3]", "W1[1,3]", "W1[2,4]"]),
    ("(α°∧β°)∨(α°∧γ°)", &["W1[1,4]", "W1[2,3]", "W3", "W2[*]", "W4[*]"]),
    ("(β°∧γ°)∨(β°∧α°)", &["W1[1,3]", "W1[2,4]", "W3", "W2[*]", "W4[*]"]),
    ("(γ°∧α°)∨(γ°∧β°)", &["W1[1,2]", "W1[3,4]", "W3", "W2[*]", "W4[*]"]),
    ("α°∧(β°∨γ°)", &["W1[1,4]", "W1[2,3]", "W2[1,4]", "W2[2,3]", "W3"]),
    ("β°∧(γ°∨α°)", &["W1[1,3]", "W1[2,4]", "W2[1,3]", "W2[2,4]", "W3"]),
    ("γ°∧(α°∨β°)", &["W1[1,2]", "W1[3,4]", "W2[1,2]", "W2[3,4]", "W3"]),
    ("α°", &["W1[1,4]", "W1[2,3]"]),
    ("β°", &["W1[1,3]", "W1[2,4]"]),
    ("γ°", &["W1[1,2]", "W1[3,4]"]),
    ("α°∨(β°∧γ°)", &["W3", "W2[1,2]", "W2[1,3]", "W2[2,4]", "W2[3,4]", "W4[1,4]", "W4[2,3]"]),
    ("β°∨(γ°∧α°)", &["W3", "W2[1,2]", "W2[1,4]", "W2[2,3]", "W2[3,4]", "W4[1,3]", "W4[2,4]"]),
    ("γ°∨(α°∧β°)", &["W3", "W2[1,3]", "W2[1,4]", "W2[2,3]", "W2[2,4]", "W4[1,2]", "W4[3,4]"]),
    ("(α°∨β°)∧(α°∨γ°)", &["W2[1,2]", "W2[3,4]", "W2[1,3]", "W2[2,4]", "W3"]),
    ("(β°∨γ°)∧(β°∨α°)", &["W2[1,4]", "W2[2,3]", "W2[1,2]", "W2[3,4]", "W3"]),
    ("(γ°∨α°)∧(γ°∨β°)", &["W2[1,3]", "W2[2,4]", "W2[1,4]", "W2[2,3]", "W3"]),
    ("β°∨γ°", &["W2[1,4]", "W2[2,3]", "W3"]),
    ("γ°∨α°", &["W2[1,3]", "W2[2,4]", "W3"]),
    ("α°∨β°", &["W2[1,2]", "W2[3,4]", "W3"]),
    ("α°∨β°∨γ°", &["W3"]),
];

struct Catalog {
    entries: Vec<(ConeId, CriteriaSet, Vec<LinForm>)>,
}

impl Catalog {
    fn lookup(&self, cone: &ConeId) -> &(ConeId, CriteriaSet, Vec<LinForm>) {
        self.entries.iter().find(|e| e.0 == *cone).expect("catalog is total")
    }
}

fn expand_state(name: &str) -> Vec<StateIneq> {
    if name == "S4[*]" {
        return StateIneq::all_s4();
    }
    vec![name.parse().unwrap_or_else(|e| panic!("catalog entry {name}: {e}"))]
}

fn expand_witness(name: &str) -> Vec<WitnessIneq> {
    match name {
        "W2[*]" => IndexPair::all().into_iter().map(WitnessIneq::W2).collect(),
        "W4[*]" => IndexPair::all().into_iter().map(WitnessIneq::W4).collect(),
        _ => vec![name.parse().unwrap_or_else(|e| panic!("catalog entry {name}: {e}"))],
    }
}

fn build_catalog() -> Catalog {
    let mut entries = Vec::new();
    for (name, items) in PRIMAL_TABLE {
        let cone: ConeId = name.parse().unwrap_or_else(|e| panic!("catalog name {name}: {e}"));
        let set = CriteriaSet::State(items.iter().flat_map(|s| expand_state(s)).collect());
        entries.push((cone, set));
    }
    for (name, items) in DUAL_TABLE {
        let cone: ConeId = name.parse().unwrap_or_else(|e| panic!("catalog name {name}: {e}"));
        let set = CriteriaSet::Witness(items.iter().flat_map(|s| expand_witness(s)).collect());
        entries.push((cone, set));
    }
    let catalog = Catalog {
        entries: entries
            .into_iter()
            .map(|(c, s)| {
                let f = s.forms();
                (c, s, f)
            })
            .collect(),
    };
    if let Err(msg) = check_catalog(&catalog) {
        panic!("cone catalog is inconsistent: {msg}");
    }
    catalog
}

/// Every cone appears once, and each entry equals the transport of its
/// symmetry-class representative along the induced index relabeling.
fn check_catalog(catalog: &Catalog) -> std::result::Result<(), String> {
    let all = ConeId::all();
    let listed: BTreeSet<ConeId> = catalog.entries.iter().map(|e| e.0).collect();
    if listed.len() != catalog.entries.len() || listed != all.iter().copied().collect() {
        return Err("the table does not list every cone exactly once".into());
    }
    for (cone, set, _) in &catalog.entries {
        if cone.is_dual() != matches!(set, CriteriaSet::Witness(_)) {
            return Err(format!("{cone} has criteria of the wrong kind"));
        }
        for perm in all_atom_perms() {
            let sigma = party_op_of(&perm).block_map();
            let image = cone.permute(&perm);
            let transported = set.map(&sigma);
            let listed = &catalog.lookup(&image).1;
            if transported.key() != listed.key() {
                return Err(format!("{image} differs from the transport of {cone}"));
            }
        }
    }
    Ok(())
}

static CATALOG: LazyLock<Catalog> = LazyLock::new(build_catalog);

/// The criteria set of a cone.
pub fn catalog(cone: &ConeId) -> &'static CriteriaSet {
    &CATALOG.lookup(cone).1
}

/// All scalar linear forms of the cone's criteria, deduplicated.
pub fn cone_forms(cone: &ConeId) -> &'static [LinForm] {
    &CATALOG.lookup(cone).2
}

/// Conjunction margin of the cone on a profile (state profile for primal
/// cones, witness radii for dual cones).
pub fn member_profile<S: Real>(cone: &ConeId, p: &Profile<S>) -> Margin<S> {
    let slack = min_form(cone_forms(cone), p);
    Margin { holds: S::nonnegative(&slack, p.scale(), p.tol), slack }
}

/// Object being tested for membership.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    State(&'a XState),
    Witness(&'a WitnessX),
}

impl<'a> From<&'a XState> for Operand<'a> {
    fn from(x: &'a XState) -> Operand<'a> {
        Operand::State(x)
    }
}

impl<'a> From<&'a WitnessX> for Operand<'a> {
    fn from(w: &'a WitnessX) -> Operand<'a> {
        Operand::Witness(w)
    }
}

/// Membership margin; primal cones take states and dual cones witnesses.
pub fn member<'a, S: Real>(x: impl Into<Operand<'a>>, cone: &ConeId) -> Result<Margin<S>> {
    match (x.into(), cone.is_dual()) {
        (Operand::State(s), false) => Ok(member_profile(cone, &s.profile()?)),
        (Operand::Witness(w), true) => Ok(member_profile(cone, &w.radii())),
        (Operand::State(_), true) => Err(Error::Input(format!("{cone} is a dual cone; it takes witnesses"))),
        (Operand::Witness(_), false) => Err(Error::Input(format!("{cone} is a primal cone; it takes states"))),
    }
}

/// Whether a verdict fully characterizes membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Characterization {
    /// X-shaped input: verdicts are exact.
    Exact,
    /// Verdicts computed on the X-part of a dense matrix: a violation proves
    /// non-membership, a pass is only a necessary condition.
    NecessaryOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeMargin<S> {
    pub cone: ConeId,
    pub margin: Margin<S>,
}

/// Margins of every cone of one family for a single operand.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeProfile<S> {
    pub entries: Vec<ConeMargin<S>>,
    pub psd: bool,
    pub characterization: Characterization,
}

impl<S: Real> LatticeProfile<S> {
    pub fn margin(&self, cone: &ConeId) -> Option<&Margin<S>> {
        self.entries.iter().find(|e| e.cone == *cone).map(|e| &e.margin)
    }

    pub fn holds(&self, cone: &ConeId) -> bool {
        self.margin(cone).is_some_and(|m| m.holds)
    }

    /// Cones that hold while none of the cones directly below them hold.
    pub fn minimal(&self) -> Vec<ConeId> {
        self.entries
            .iter()
            .filter(|e| e.margin.holds)
            .filter(|e| !self.entries.iter().any(|f| f.margin.holds && f.cone.covers().contains(&e.cone)))
            .map(|e| e.cone)
            .collect()
    }

    /// First arrow `lo → hi` of the diagram with `lo` holding and `hi` not.
    pub fn monotonicity_violation(&self, tol: f64, scale: f64) -> Option<(ConeId, ConeId)> {
        for e in &self.entries {
            if !e.margin.holds {
                continue;
            }
            for hi in e.cone.covers() {
                let m = self.margin(&hi).expect("profile covers the whole family");
                // Float verdicts near the boundary may flip across an arrow by
                // a few tolerance units; only a clear failure is a violation.
                let clear = S::EXACT || m.slack.to_f64() < -8.0 * tol * scale;
                if !m.holds && clear {
                    return Some((e.cone, hi));
                }
            }
        }
        None
    }
}

/// One cone's entry in a [`ProfileReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub cone: ConeId,
    pub holds: bool,
    pub slack: f64,
    /// Exact slack, present for exact profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_slack: Option<String>,
}

/// Serializable form of a [`LatticeProfile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub exact: bool,
    pub psd: bool,
    pub characterization: Characterization,
    pub tolerance: Option<f64>,
    pub cones: Vec<ConeVerdict>,
    pub minimal: Vec<ConeId>,
}

impl ProfileReport {
    pub fn new<S: Real + fmt::Display>(p: &LatticeProfile<S>, tol: f64) -> ProfileReport {
        ProfileReport {
            exact: S::EXACT,
            psd: p.psd,
            characterization: p.characterization,
            tolerance: (!S::EXACT).then_some(tol),
            cones: p
                .entries
                .iter()
                .map(|e| ConeVerdict {
                    cone: e.cone,
                    holds: e.margin.holds,
                    slack: e.margin.slack.to_f64(),
                    exact_slack: S::EXACT.then(|| e.margin.slack.to_string()),
                })
                .collect(),
            minimal: p.minimal(),
        }
    }

    pub fn holds(&self, cone: &ConeId) -> Option<bool> {
        self.cones.iter().find(|v| v.cone == *cone).map(|v| v.holds)
    }
}

impl fmt::Display for ProfileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.tolerance {
            None => "exact".to_string(),
            Some(t) => format!("float, tolerance {t:e}"),
        };
        writeln!(f, "mode: {mode}")?;
        writeln!(f, "psd: {}", self.psd)?;
        if self.characterization == Characterization::NecessaryOnly {
            writeln!(f, "note: dense input; verdicts use the X-part and a pass is only necessary")?;
        }
        for v in &self.cones {
            let slack = v.exact_slack.clone().unwrap_or_else(|| format!("{:.6e}", v.slack));
            writeln!(f, "{:<14} {:<5} slack {slack}", v.cone.to_string(), if v.holds { "in" } else { "out" })?;
        }
        let minimal: Vec<String> = self.minimal.iter().map(|c| c.to_string()).collect();
        write!(f, "minimal: {}", if minimal.is_empty() { "none".into() } else { minimal.join(", ") })
    }
}

/// The distinct linear forms of one family, and for each cone the indices
/// of its forms.
struct FormIndex {
    cones: Vec<ConeId>,
    forms: Vec<LinForm>,
    members: Vec<Vec<usize>>,
}

impl FormIndex {
    fn build(cones: Vec<ConeId>) -> FormIndex {
        let mut forms: Vec<LinForm> = Vec::new();
        let mut lookup = std::collections::HashMap::new();
        let members = cones
            .iter()
            .map(|c| {
                cone_forms(c)
                    .iter()
                    .map(|f| {
                        *lookup.entry(*f).or_insert_with(|| {
                            forms.push(*f);
                            forms.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        FormIndex { cones, forms, members }
    }
}

static PRIMAL_INDEX: LazyLock<FormIndex> = LazyLock::new(|| FormIndex::build(ConeId::all_primal()));
static DUAL_INDEX: LazyLock<FormIndex> = LazyLock::new(|| FormIndex::build(ConeId::all_dual()));

/// Margins of all 23 cones of the family matching `dual`; each distinct
/// linear form is evaluated once.
fn profile_family<S: Real>(p: &Profile<S>, dual: bool) -> Vec<ConeMargin<S>> {
    let index: &FormIndex = if dual { &DUAL_INDEX } else { &PRIMAL_INDEX };
    let values: Vec<S> = index.forms.iter().map(|f| f.eval(&p.c, &p.m)).collect();
    let scale = p.scale();
    index
        .cones
        .iter()
        .zip(&index.members)
        .map(|(cone, idx)| {
            let mut best = &values[idx[0]];
            for &k in &idx[1..] {
                if values[k].cmp_scalar(best) == Ordering::Less {
                    best = &values[k];
                }
            }
            let slack = best.clone();
            ConeMargin { cone: *cone, margin: Margin { holds: S::nonnegative(&slack, scale, p.tol), slack } }
        })
        .collect()
}

/// Lattice profile of a state over the 23 primal cones. For psd input the
/// diagram's inclusions are asserted; a violation is an internal fault.
pub fn lattice_profile<S: Real>(x: &XState) -> Result<LatticeProfile<S>> {
    lattice_profile_with(x, Characterization::Exact, crate::xcore::DEFAULT_TOLERANCE)
}

pub fn lattice_profile_with<S: Real>(
    x: &XState,
    characterization: Characterization,
    tol: f64,
) -> Result<LatticeProfile<S>> {
    let p = x.profile::<S>()?.with_tolerance(tol);
    let profile = LatticeProfile { entries: profile_family(&p, false), psd: x.psd(), characterization };
    if x.psd() {
        if let Some((lo, hi)) = profile.monotonicity_violation(tol, p.scale()) {
            return Err(Error::InternalConsistency(format!("{x:?} lies in {lo} but not in {hi}", x = x.matrix())));
        }
    }
    Ok(profile)
}

/// Lattice profile of a witness over the 23 dual cones.
pub fn witness_lattice_profile<S: Real>(w: &WitnessX) -> Result<LatticeProfile<S>> {
    let p = w.radii::<S>();
    let profile =
        LatticeProfile { entries: profile_family(&p, true), psd: true, characterization: Characterization::Exact };
    if let Some((lo, hi)) = profile.monotonicity_violation(p.tol, p.scale()) {
        return Err(Error::InternalConsistency(format!("witness lies in {lo} but not in {hi}")));
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Surd, Q};
    use proptest::prelude::*;

    fn cone(s: &str) -> ConeId {
        s.parse().unwrap()
    }

    #[test]
    fn profile_report_round_trips() {
        let x = XState::from_i64([2, 1, 1, 2], [2, 1, 1, 2], [(2, 0), (0, 0), (1, 0), (0, 0)]);
        let exact = ProfileReport::new(&lattice_profile::<Surd>(&x).unwrap(), 1e-9);
        let float = ProfileReport::new(&lattice_profile::<f64>(&x).unwrap(), 1e-9);
        for r in [&exact, &float] {
            let back: ProfileReport = serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap();
            assert_eq!(&back, r);
            assert_eq!(r.cones.len(), 23);
        }
        assert_eq!(exact.holds(&cone("α")), Some(true));
        assert!(exact.tolerance.is_none() && float.tolerance == Some(1e-9));
        assert!(exact.cones.iter().all(|v| v.exact_slack.is_some()));
        assert_eq!(exact.minimal, vec![cone("α∧(β∨γ)"), cone("β∨(γ∧α)")]);
    }

    fn names(c: &ConeId) -> BTreeSet<String> {
        catalog(c).names().into_iter().collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn catalog_loads_and_is_consistent() {
        assert_eq!(CATALOG.entries.len(), 46);
        check_catalog(&CATALOG).unwrap();
    }

    #[test]
    fn catalog_examples() {
        assert_eq!(names(&cone("A")), set(&["S1[1,4]", "S1[2,3]"]));
        let jm = names(&cone("(C^A)v(C^B)"));
        assert_eq!(jm.len(), 17);
        assert!(jm.contains("S1[1,2]") && jm.contains("S1[3,4]"));
        assert_eq!(
            names(&cone("Cv(A^B)*")),
            set(&["W3", "W2[1,3]", "W2[1,4]", "W2[2,3]", "W2[2,4]", "W4[1,2]", "W4[3,4]"])
        );
    }

    #[test]
    fn twenty_three_cones_per_family() {
        assert_eq!(ConeId::all_primal().len(), 23);
        assert_eq!(ConeId::all_dual().len(), 23);
        let names: BTreeSet<String> = ConeId::all().iter().map(|c| c.to_string()).collect();
        assert_eq!(names.len(), 46);
    }

    #[test]
    fn display_and_dsl_round_trip() {
        for c in ConeId::all() {
            assert_eq!(cone(&c.to_string()), c);
            assert_eq!(cone(&c.dsl()), c);
        }
        assert_eq!(cone("(A^B)v(A^C)").to_string(), "(α∧β)∨(α∧γ)");
        assert_eq!(cone("(A^B)v(A^C)*").to_string(), "(α°∧β°)∨(α°∧γ°)");
    }

    #[test]
    fn canonicalization_examples() {
        let c = canonicalize("(B^C)v(B^A)").unwrap();
        assert_eq!(c.cone, ConeId::primal(Shape::JoinOfMeets, Atom::Beta));
        assert_eq!(c.representative, cone("(A^B)v(A^C)"));
        assert_eq!(c.perm, [Atom::Beta, Atom::Alpha, Atom::Gamma]);
        assert_eq!(canonicalize("A").unwrap().cone, ConeId::atom(Atom::Alpha));
        assert_eq!(canonicalize("(AvB)^(AvC)").unwrap().cone, ConeId::primal(Shape::MeetOfJoins, Atom::Alpha));
        assert_eq!(canonicalize("B ∨ (A ∧ C)").unwrap().cone, ConeId::primal(Shape::JoinMeet, Atom::Beta));
        assert_eq!(canonicalize("A^B^C").unwrap().cone, ConeId::bottom());
        assert_eq!(canonicalize("Cv(BvA)").unwrap().cone, ConeId::top());
        assert_eq!(canonicalize("α°∨β°").unwrap().cone, ConeId::new(Shape::JoinPair, Atom::Gamma, true));
        assert_eq!(canonicalize("A*").unwrap().cone, ConeId::new(Shape::Atom, Atom::Alpha, true));
        assert_eq!(canonicalize("A^A^B").unwrap().cone, ConeId::primal(Shape::MeetPair, Atom::Gamma));
    }

    #[test]
    fn canonicalization_rejects() {
        for bad in ["", "A^", "(A", "AvB)", "D", "A^(AvB)", "(A^B)v(B^C)v(A^C)", "α°∨β", "(A^B)*v C", "A**"] {
            assert!(canonicalize(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn polar_exchanges_meet_and_join() {
        assert_eq!(cone("(A^B)v(A^C)").polar(), cone("(AvB)^(AvC)*"));
        assert_eq!(cone("A^B").polar(), cone("AvB*"));
        assert_eq!(cone("Av(B^C)").polar(), cone("A^(BvC)*"));
        assert_eq!(cone("A").polar(), cone("A*"));
        for c in ConeId::all() {
            assert_eq!(c.polar().polar(), c);
        }
    }

    #[test]
    fn diagram_order() {
        let bottom = ConeId::bottom();
        assert_eq!(bottom.above().len(), 22);
        assert!(ConeId::top().above().is_empty());
        assert!(cone("(A^B)v(A^C)").le(&cone("A^(BvC)")));
        assert!(cone("(A^B)v(A^C)").le(&cone("Bv(A^C)")));
        assert!(cone("A^(BvC)").le(&cone("(BvC)^(BvA)")));
        assert!(!cone("A").le(&cone("B")));
        assert!(!cone("Av(B^C)").le(&cone("A^(BvC)")));
        // Criteria sets shrink or weaken along arrows; a sanity check on sizes
        // of the covering relation.
        let arrows: usize = ConeId::all_primal().iter().map(|c| c.covers().len()).sum();
        assert_eq!(arrows, 3 + 6 + 9 + 9 + 3 + 3 + 6 + 3);
    }

    #[test]
    fn atom_pairs_follow_party_action() {
        for g in PartyOp::all() {
            let perm = atom_perm_of(g);
            let sigma = g.block_map();
            for x in Atom::ALL {
                let image: BTreeSet<IndexPair> = x.pairs().iter().map(|p| p.map(&sigma)).collect();
                let expected: BTreeSet<IndexPair> = perm[x.index()].pairs().into_iter().collect();
                assert_eq!(image, expected);
            }
        }
    }

    fn rho(z: [i64; 4]) -> XState {
        XState::from_i64([2, 1, 1, 2], [2, 1, 1, 2], z.map(|x| (x, 0)))
    }

    #[test]
    fn rho1_and_rho2_memberships() {
        let rho1 = rho([2, 0, 1, 0]);
        let rho2 = rho([2, 1, 0, 0]);
        let m = |x: &XState, c: &str| member::<Surd>(x, &cone(c)).unwrap().holds;
        assert!(m(&rho1, "A") && m(&rho1, "Bv(C^A)") && !m(&rho1, "(A^B)v(A^C)"));
        assert!(m(&rho2, "A") && m(&rho2, "Cv(B^A)") && !m(&rho2, "(A^B)v(A^C)"));
        let lp = lattice_profile::<Surd>(&rho1).unwrap();
        assert!(lp.holds(&cone("A")));
        assert!(!lp.holds(&cone("(A^B)v(A^C)")));
    }

    #[test]
    fn member_rejects_kind_mismatch() {
        let x = rho([0; 4]);
        assert!(member::<f64>(&x, &cone("A*")).is_err());
        let w = WitnessX::from_i64([1; 4], [1; 4], [(0, 0); 4]).unwrap();
        assert!(member::<f64>(&w, &cone("A")).is_err());
        assert!(member::<f64>(&w, &cone("A*")).unwrap().holds);
    }

    #[test]
    fn all_ones_and_zero_are_everywhere() {
        let ones = XState::from_i64([1; 4], [1; 4], [(1, 0); 4]);
        let lp = lattice_profile::<Surd>(&ones).unwrap();
        assert!(lp.entries.iter().all(|e| e.margin.holds));
        assert_eq!(lp.minimal(), vec![ConeId::bottom()]);
        let zero = XState::from_i64([0; 4], [0; 4], [(0, 0); 4]);
        let lp = lattice_profile::<Surd>(&zero).unwrap();
        assert!(lp.entries.iter().all(|e| e.margin.holds && e.margin.slack.is_zero()));
        let diag = XState::from_i64([1, 0, 0, 0], [0; 4], [(0, 0); 4]);
        assert!(lattice_profile::<Surd>(&diag).unwrap().entries.iter().all(|e| e.margin.holds));
    }

    #[test]
    fn minimal_cones_of_rho1() {
        let lp = lattice_profile::<Surd>(&rho([2, 0, 1, 0])).unwrap();
        let min = lp.minimal();
        for c in &min {
            assert!(lp.holds(c));
        }
        assert!(min.iter().any(|c| c.le(&cone("A"))));
    }

    fn psd_state() -> impl Strategy<Value = XState> {
        (proptest::array::uniform4((0i64..6, 1i64..6, 0i64..=8)), proptest::array::uniform4(0usize..3)).prop_map(
            |(blocks, phase)| {
                let mut a = [0; 4];
                let mut z = [(0, 0); 4];
                for i in 0..4 {
                    let (c, _, f) = blocks[i];
                    a[i] = c * 5;
                    // |z| = c·f/8·5 along a Pythagorean direction
                    let (re, im) = [(5, 0), (3, 4), (0, 5)][phase[i]];
                    z[i] = (c * f * re / 8, c * f * im / 8);
                }
                XState::from_i64(a, a, z)
            },
        )
    }

    fn table1_sets() -> Vec<(ConeId, Vec<StateIneq>)> {
        let s = |x: &str| x.parse::<StateIneq>().unwrap();
        let l1 = vec![s("S4[1,2|3,4]")];
        let l2 = vec![s("S4[1,3|2,4]")];
        let l3 = ["S4[1,2|1,3]", "S4[1,2|2,4]", "S4[1,3|3,4]", "S4[2,4|3,4]"].map(s).to_vec();
        let l4 = vec![s("S1[1,4]"), s("S1[2,3]")];
        let l5 = vec![s("S4[1,4|2,3]")];
        let cat = |parts: &[&Vec<StateIneq>]| parts.iter().flat_map(|v| v.iter().copied()).collect::<Vec<_>>();
        vec![
            (cone("AvB"), cat(&[&l1])),
            (cone("(AvB)^(AvC)"), cat(&[&l1, &l2])),
            (cone("Av(B^C)"), cat(&[&l1, &l2, &l3])),
            (cone("A"), cat(&[&l1, &l2, &l3, &l4])),
            (cone("A^(BvC)"), cat(&[&l1, &l2, &l3, &l4, &l5])),
            (cone("(A^B)v(A^C)"), cat(&[&l4, &StateIneq::all_s4()])),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn symmetry_covariance(x in psd_state()) {
            for g in PartyOp::all() {
                let perm = atom_perm_of(g);
                let gx = x.act(g);
                for c in ConeId::all_primal() {
                    let a = member::<Surd>(&x, &c).unwrap();
                    let b = member::<Surd>(&gx, &c.permute(&perm)).unwrap();
                    prop_assert_eq!(a.holds, b.holds);
                    prop_assert!(a.slack.cmp_value(&b.slack) == Ordering::Equal);
                }
            }
        }

        #[test]
        fn monotone_on_psd_states(x in psd_state()) {
            prop_assert!(lattice_profile::<Surd>(&x).is_ok());
            prop_assert!(lattice_profile::<f64>(&x).is_ok());
        }

        #[test]
        fn table1_conjunctions_match(x in psd_state()) {
            let p = x.profile::<Surd>().unwrap();
            for (c, ineqs) in table1_sets() {
                let conj = ineqs.iter().all(|i| crate::ineq::eval_state_profile(i, &p).holds);
                prop_assert_eq!(member_profile(&c, &p).holds, conj, "{}", c);
            }
        }

        #[test]
        fn exact_and_float_agree_away_from_boundary(x in psd_state()) {
            let e = lattice_profile::<Surd>(&x).unwrap();
            let f = lattice_profile::<f64>(&x).unwrap();
            for (a, b) in e.entries.iter().zip(&f.entries) {
                if a.margin.slack.signum() != Ordering::Equal {
                    prop_assert_eq!(a.margin.holds, b.margin.holds);
                }
                prop_assert!((a.margin.slack.to_f64() - b.margin.slack).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn surd_profiles_handle_irrational_c() {
        // c = (√2, √2, √2, √2) against m = (1, 1, 1, 1): S1 holds strictly.
        let x = XState::from_i64([1; 4], [2; 4], [(1, 0); 4]);
        let m = member::<Surd>(&x, &cone("A^B^C")).unwrap();
        assert!(m.holds);
        let (lo, _) = m.slack.bounds(40);
        assert!(lo > Q::new(41, 100));
    }
}
