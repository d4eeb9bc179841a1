//! Dense two-phase simplex over exact rationals.
//!
//! Constraint coefficients are rational; the objective may live in any
//! [`Scalar`] (rationals, sums of square roots, floats), which lets the
//! certification LP keep irrational state radii exact. Pivoting follows
//! Bland's rule with the natural variable order, so identical inputs always
//! produce the same vertex.

use std::cmp::Ordering;

use crate::arith::{Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, relation: Relation, rhs: Q) -> Constraint {
        Constraint { coeffs, relation, rhs }
    }

    pub fn from_i64(coeffs: &[i64], relation: Relation, rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&c| Q::from_i64(c)).collect(), relation, Q::from_i64(rhs))
    }
}

/// A linear program over `n` variables. Variables are nonnegative unless
/// marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<S>,
    pub sense: Sense,
    pub free: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn solution(&self) -> Option<&[Q]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(n: usize, sense: Sense, objective: Vec<S>) -> LinearProgram<S> {
        assert_eq!(objective.len(), n, "objective arity");
        LinearProgram { n, constraints: Vec::new(), objective, sense, free: vec![false; n] }
    }

    pub fn constrain(&mut self, c: Constraint) -> &mut Self {
        assert_eq!(c.coeffs.len(), self.n, "constraint arity");
        self.constraints.push(c);
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn solve(&self) -> LpOutcome<S> {
        // Column layout: split variables, then one slack/surplus per
        // inequality, then one artificial per row.
        let mut columns: Vec<(usize, bool)> = Vec::new(); // (original var, negated part)
        for v in 0..self.n {
            columns.push((v, false));
            if self.free[v] {
                columns.push((v, true));
            }
        }
        let n_struct = columns.len();
        // Orient every row so its right-hand side is nonnegative; `≥ 0` rows
        // flip to `≤ 0` so their slack can start in the basis.
        let oriented: Vec<(Vec<Q>, Relation, Q)> = self
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.relation == Relation::Ge);
                if flip {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let n_slack = oriented.iter().filter(|c| c.1 != Relation::Eq).count();
        let n_art = oriented.iter().filter(|c| c.1 != Relation::Le).count();
        let n_total = n_struct + n_slack + n_art;
        let art0 = n_struct + n_slack;

        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(oriented.len());
        let mut basis = Vec::with_capacity(oriented.len());
        let (mut slack, mut art) = (n_struct, art0);
        for (coeffs, relation, rhs) in oriented {
            let mut row = vec![Q::zero(); n_total + 1];
            for (k, &(v, neg)) in columns.iter().enumerate() {
                row[k] = if neg { -&coeffs[v] } else { coeffs[v].clone() };
            }
            row[n_total] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Q::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Q::from_i64(-1);
                    slack += 1;
                    row[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Q::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        let mut tab = Tableau { rows, basis, n_total };

        // Phase one: drive the artificials to zero.
        if n_art > 0 {
            let mut cost1 = vec![Q::zero(); n_total];
            for c in cost1.iter_mut().skip(art0) {
                *c = Q::one();
            }
            tab.optimize(&cost1, &vec![true; n_total]);
            let infeas: Q =
                tab.rows.iter().zip(&tab.basis).filter(|(_, &b)| b >= art0).map(|(r, _)| r[n_total].clone()).sum();
            if infeas.is_positive() {
                return LpOutcome::Infeasible;
            }
            tab.drive_out_artificials(art0);
        }

        // Phase two.
        let mut cost2 = vec![S::zero(); n_total];
        for (k, &(v, neg)) in columns.iter().enumerate() {
            let c = &self.objective[v];
            let c = if self.sense == Sense::Maximize { S::zero().minus(c) } else { c.clone() };
            cost2[k] = if neg { S::zero().minus(&c) } else { c };
        }
        let mut allowed2 = vec![true; n_total];
        for a in allowed2.iter_mut().skip(art0) {
            *a = false;
        }
        if !tab.optimize(&cost2, &allowed2) {
            return LpOutcome::Unbounded;
        }

        let mut col_values = vec![Q::zero(); n_struct];
        for (row, &b) in tab.rows.iter().zip(&tab.basis) {
            if b < n_struct {
                col_values[b] = row[n_total].clone();
            }
        }
        let mut x = vec![Q::zero(); self.n];
        for (k, &(v, neg)) in columns.iter().enumerate() {
            x[v] = if neg { &x[v] - &col_values[k] } else { &x[v] + &col_values[k] };
        }
        let mut value = S::zero();
        for (c, xv) in self.objective.iter().zip(&x) {
            value = value.plus(&c.times_q(xv));
        }
        LpOutcome::Optimal { value, x }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    n_total: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for e in self.rows[r].iter_mut() {
            if !e.is_zero() {
                *e = &*e * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..=self.n_total).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &support {
                row[j] = &row[j] - &(&f * &pivot_row[j]);
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    fn reduced_costs<S: Scalar>(&self, cost: &[S]) -> Vec<S> {
        let mut red = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.signum() == Ordering::Equal {
                continue;
            }
            for (j, e) in row.iter().take(self.n_total).enumerate() {
                if !e.is_zero() {
                    red[j] = red[j].minus(&cb.times_q(e));
                }
            }
        }
        red
    }

    /// Minimize `cost` over the current basis; returns false when unbounded.
    fn optimize<S: Scalar>(&mut self, cost: &[S], allowed: &[bool]) -> bool {
        let mut red = self.reduced_costs(cost);
        loop {
            let entering = (0..self.n_total)
                .find(|&j| allowed[j] && !self.basis.contains(&j) && red[j].signum() == Ordering::Less);
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.n_total] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.cmp(lr) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*li],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, col);
            // Update reduced costs with the new pivot row.
            let f = red[col].clone();
            for (j, e) in self.rows[r].iter().take(self.n_total).enumerate() {
                if !e.is_zero() {
                    red[j] = red[j].minus(&f.times_q(e));
                }
            }
        }
    }

    /// After phase one, pivot zero-level artificials out of the basis, or drop
    /// their rows when they are linearly dependent on the others.
    fn drive_out_artificials(&mut self, art0: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < art0 {
                i += 1;
                continue;
            }
            match (0..art0).find(|&j| !self.rows[i][j].is_zero()) {
                Some(col) => {
                    self.pivot(i, col);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::Surd;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn maximizes_a_bounded_lp() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let mut lp = LinearProgram::new(2, Sense::Maximize, vec![q(3), q(2)]);
        lp.constrain(Constraint::from_i64(&[1, 1], Relation::Le, 4))
            .constrain(Constraint::from_i64(&[1, 3], Relation::Le, 6))
            .constrain(Constraint::from_i64(&[1, 0], Relation::Le, 3));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(11), x: vec![q(3), q(1)] });
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Minimize, vec![q(1)]);
        lp.constrain(Constraint::from_i64(&[1], Relation::Ge, 2)).constrain(Constraint::from_i64(
            &[1],
            Relation::Le,
            1,
        ));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(2, Sense::Maximize, vec![q(1), q(0)]);
        lp.constrain(Constraint::from_i64(&[1, -1], Relation::Le, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn handles_equalities_free_variables_and_redundancy() {
        // min x - y with x free, x + y = 2, 2x + 2y = 4, y ≤ 5
        let mut lp = LinearProgram::new(2, Sense::Minimize, vec![q(1), q(-1)]);
        lp.set_free(0)
            .constrain(Constraint::from_i64(&[1, 1], Relation::Eq, 2))
            .constrain(Constraint::from_i64(&[2, 2], Relation::Eq, 4))
            .constrain(Constraint::from_i64(&[0, 1], Relation::Le, 5));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(-8), x: vec![q(-3), q(5)] });
    }

    #[test]
    fn negative_right_hand_sides() {
        // min x, -x ≤ -3  (x ≥ 3)
        let mut lp = LinearProgram::new(1, Sense::Minimize, vec![q(1)]);
        lp.constrain(Constraint::from_i64(&[-1], Relation::Le, -3));
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(3), x: vec![q(3)] });
    }

    #[test]
    fn irrational_objective() {
        // min x − √2 y over x + y ≤ 1, y ≤ x: optimum at x = y = 1/2
        let obj = vec![Surd::from_q(q(1)), Surd::zero().minus(&Surd::sqrt(&q(2)))];
        let mut lp = LinearProgram::new(2, Sense::Minimize, obj);
        lp.constrain(Constraint::from_i64(&[1, 1], Relation::Le, 1)).constrain(Constraint::from_i64(
            &[-1, 1],
            Relation::Le,
            0,
        ));
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(x, vec![Q::new(1, 2), Q::new(1, 2)]);
                assert_eq!(value.signum(), Ordering::Less);
                assert!((value.to_f64() - (1.0 - 2f64.sqrt()) / 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let c = vec![Q::new(-3, 4), q(150), Q::new(-1, 50), q(6)];
        let mut lp = LinearProgram::new(4, Sense::Minimize, c);
        lp.constrain(Constraint::new(vec![Q::new(1, 4), q(-60), Q::new(-1, 25), q(9)], Relation::Le, q(0)))
            .constrain(Constraint::new(vec![Q::new(1, 2), q(-90), Q::new(-1, 50), q(3)], Relation::Le, q(0)))
            .constrain(Constraint::from_i64(&[0, 0, 1, 0], Relation::Le, 1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::new(-1, 20)),
            other => panic!("{other:?}"),
        }
    }

    /// Brute force over all vertices of a small LP with ≤ constraints and
    /// nonnegative variables.
    fn vertex_optimum(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Option<Q> {
        let n = c.len();
        let mut rows: Vec<(Vec<Q>, Q)> =
            a.iter().zip(b).map(|(r, &rhs)| (r.iter().map(|&v| q(v)).collect(), q(rhs))).collect();
        for k in 0..n {
            let mut e = vec![q(0); n];
            e[k] = q(-1);
            rows.push((e, q(0)));
        }
        let mut best: Option<Q> = None;
        let idx: Vec<usize> = (0..rows.len()).collect();
        for subset in combinations(&idx, n) {
            let m: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].0.clone()).collect();
            let rhs: Vec<Q> = subset.iter().map(|&i| rows[i].1.clone()).collect();
            let Some(x) = solve_square(m, rhs) else { continue };
            if rows.iter().all(|(r, h)| r.iter().zip(&x).map(|(a, b)| a * b).sum::<Q>() <= *h) {
                let v: Q = c.iter().zip(&x).map(|(&ci, xi)| &q(ci) * xi).sum();
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best
    }

    pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            for mut rest in combinations(&items[i + 1..], k - 1) {
                rest.insert(0, x);
                out.push(rest);
            }
        }
        out
    }

    pub(crate) fn solve_square(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
        let n = m.len();
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, p);
            rhs.swap(col, p);
            let inv = m[col][col].recip();
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = &m[r][col] * &inv;
                    for j in 0..n {
                        m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                    }
                    rhs[r] = &rhs[r] - &(&f * &rhs[col]);
                }
            }
        }
        Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn agrees_with_vertex_enumeration(
            a in proptest::collection::vec(proptest::collection::vec(-3i64..5, 3), 2..5),
            c in proptest::collection::vec(-4i64..4, 3),
        ) {
            // Box the region so the optimum is finite.
            let mut a = a;
            let mut b: Vec<i64> = a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<i64>() + 1).collect();
            for k in 0..3 {
                let mut e = vec![0; 3];
                e[k] = 1;
                a.push(e);
                b.push(4);
            }
            let mut lp = LinearProgram::new(3, Sense::Minimize, c.iter().map(|&v| q(v)).collect());
            for (r, &h) in a.iter().zip(&b) {
                lp.constrain(Constraint::from_i64(r, Relation::Le, h));
            }
            let expected = vertex_optimum(&a, &b, &c).unwrap();
            match lp.solve() {
                LpOutcome::Optimal { value, x } => {
                    prop_assert_eq!(value, expected);
                    for (r, &h) in a.iter().zip(&b) {
                        prop_assert!(r.iter().zip(&x).map(|(&ai, xi)| &q(ai) * xi).sum::<Q>() <= q(h));
                    }
                }
                other => prop_assert!(false, "{:?}", other),
            }
            // Determinism: same input, same vertex.
            prop_assert_eq!(lp.solve(), lp.solve());
        }
    }
}
