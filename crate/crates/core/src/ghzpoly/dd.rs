//! Double description method for pointed polyhedral cones `{x : A x ≥ 0}`
//! with integer data.

use crate::arith::Q;
use crate::error::{Error, Result};

/// Fixed-width bitset over constraint indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divide by the gcd of the entries.
pub(crate) fn primitive(v: &mut [i64]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub(crate) fn dot(row: &[i64], x: &[i64]) -> Result<i64> {
    let s: i128 = row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
    i64::try_from(s).map_err(|_| Error::Overflow)
}

/// Rank of a set of integer rows, by exact elimination.
pub(crate) fn rank(rows: &[&[i64]], dim: usize) -> usize {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut v: Vec<Q> = row.iter().map(|&x| Q::from_i64(x)).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = &v[p] / &b[p];
                for j in 0..dim {
                    v[j] = &v[j] - &(&f * &b[j]);
                }
            }
        }
        if let Some(p) = (0..dim).find(|&j| !v[j].is_zero()) {
            basis.push(v);
            pivots.push(p);
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

/// Solve `B x = e_k` for each k over the rationals, returning the columns
/// scaled to primitive integer vectors.
fn inverse_columns(b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let d = b.len();
    let mut m: Vec<Vec<Q>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_i64(x)).collect();
            r.extend((0..d).map(|j| Q::from_i64(i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..d {
        let p = (col..d).find(|&r| !m[r][col].is_zero()).expect("basis rows are independent");
        m.swap(col, p);
        let inv = m[col][col].recip();
        for e in m[col].iter_mut() {
            *e = &*e * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..2 * d {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
            }
        }
    }
    (0..d)
        .map(|k| {
            let col: Vec<Q> = (0..d).map(|i| m[i][d + k].clone()).collect();
            to_primitive_ints(&col)
        })
        .collect()
}

pub(crate) fn to_primitive_ints(v: &[Q]) -> Result<Vec<i64>> {
    use num::Integer;
    let lcm = v.iter().fold(num::BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<num::BigInt> =
        v.iter().map(|x| (x.to_big() * num::BigRational::from(lcm.clone())).to_integer()).collect();
    let mut out = ints.iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow)).collect::<Result<Vec<_>>>()?;
    primitive(&mut out);
    Ok(out)
}

/// A nonzero integer vector in the null space of `rows`, when the rank is
/// deficient.
fn null_vector(rows: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for e in m[r].iter_mut() {
            *e = &*e * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..dim {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free = (0..dim).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![Q::zero(); dim];
    x[free] = Q::one();
    for (i, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -&m[i][free];
    }
    to_primitive_ints(&x).ok()
}

struct DdRay {
    x: Vec<i64>,
    tight: Bits,
}

/// Extreme rays of `{x : row·x ≥ 0 for every row}`, inserting constraints in
/// the given order. The result is sorted and duplicate-free.
pub fn double_description(dim: usize, rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    // Initial simplicial cone from the first independent rows.
    let mut basis_idx: Vec<usize> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut cand: Vec<&[i64]> = basis_idx.iter().map(|&k| rows[k].as_slice()).collect();
        cand.push(row);
        if rank(&cand, dim) == cand.len() {
            basis_idx.push(i);
            if basis_idx.len() == dim {
                break;
            }
        }
    }
    if basis_idx.len() < dim {
        let witness = null_vector(rows, dim).unwrap_or_default();
        return Err(Error::NotPointed(witness));
    }
    let basis_rows: Vec<Vec<i64>> = basis_idx.iter().map(|&k| rows[k].clone()).collect();
    let cols = inverse_columns(&basis_rows)?;
    let mut rays: Vec<DdRay> = cols
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let mut tight = Bits::new(rows.len());
            for (j, &b) in basis_idx.iter().enumerate() {
                if j != k {
                    tight.set(b);
                }
            }
            DdRay { x, tight }
        })
        .collect();

    for (h, row) in rows.iter().enumerate() {
        if basis_idx.contains(&h) {
            continue;
        }
        let values: Vec<i64> = rays.iter().map(|r| dot(row, &r.x)).collect::<Result<_>>()?;
        if values.iter().all(|&v| v >= 0) {
            for (r, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    r.tight.set(h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i] < 0).collect();
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].tight.and(&rays[n].tight);
                if (common.count() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = !(0..rays.len()).any(|k| k != p && k != n && common.subset_of(&rays[k].tight));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (values[p] as i128, -(values[n] as i128));
                let mut x = rays[n]
                    .x
                    .iter()
                    .zip(&rays[p].x)
                    .map(|(&xn, &xp)| i64::try_from(vp * xn as i128 + vn * xp as i128).map_err(|_| Error::Overflow))
                    .collect::<Result<Vec<i64>>>()?;
                primitive(&mut x);
                let mut tight = common;
                tight.set(h);
                created.push(DdRay { x, tight });
            }
        }
        let mut next: Vec<DdRay> = Vec::with_capacity(rays.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v == 0 {
                r.tight.set(h);
            }
            if v >= 0 {
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }
    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| r.x).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
