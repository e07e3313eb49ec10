//! Exact linear algebra over the rationals.
//!
//! Rank decisions go through fraction-free (Bareiss) elimination on
//! denominator-cleared integer rows; reduced row echelon forms are then
//! recovered by exact back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Clears denominators of a rational row, returning integer entries.
fn clear_row(row: &[Q]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Fraction-free row echelon form. Returns the integer echelon rows and the
/// pivot column of each.
pub fn bareiss_echelon(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            clear_row(r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let num = &piv * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    bareiss_echelon(rows, ncols).1.len()
}

/// Reduced row echelon form: nonzero rows only, each with a unit pivot.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let (ech, pivots) = bareiss_echelon(rows, ncols);
    let mut out: Vec<Vec<Q>> = ech
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let p = Q::from_integer(row[pc].clone());
            row.into_iter().map(|x| Q::from_integer(x) / &p).collect()
        })
        .collect();
    for k in (0..out.len()).rev() {
        let pc = pivots[k];
        let (upper, lower) = out.split_at_mut(k);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for j in pc..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    (out, pivots)
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// A linear subspace of `Q^ambient`, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &unit_vectors(ambient, 0..ambient))
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let (basis, pivots) = rref(vectors, ambient);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo this subspace: the unique
    /// vector congruent to `v` that vanishes on every pivot column.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if out[pc].is_zero() {
                continue;
            }
            let f = out[pc].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &f * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.ambient);
        }
        // Solve sum_i s_i u_i - sum_j t_j w_j = 0 coordinatewise.
        let rows: Vec<Vec<Q>> = (0..self.ambient)
            .map(|k| {
                self.basis
                    .iter()
                    .map(|u| u[k].clone())
                    .chain(other.basis.iter().map(|w| -w[k].clone()))
                    .collect()
            })
            .collect();
        let vecs: Vec<Vec<Q>> = kernel(&rows, a + b)
            .into_iter()
            .map(|coef| combine(&self.basis, &coef[..a], self.ambient))
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Basis of a complement of `self` inside `larger`, given as vectors of
    /// `larger` reduced modulo `self` and put in echelon form.
    pub fn complement_in(&self, larger: &Subspace) -> Vec<Vec<Q>> {
        let reduced: Vec<Vec<Q>> = larger.basis.iter().map(|v| self.reduce(v)).collect();
        rref(&reduced, self.ambient).0
    }
}

pub fn unit_vectors(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Vec<Vec<Q>> {
    indices
        .into_iter()
        .map(|i| {
            let mut v = vec![Q::zero(); ambient];
            v[i] = Q::one();
            v
        })
        .collect()
}

/// `sum_i coef[i] * vectors[i]`.
pub fn combine(vectors: &[Vec<Q>], coef: &[Q], ambient: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); ambient];
    for (v, c) in vectors.iter().zip(coef) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_singular_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]]), 2), 0);
    }

    #[test]
    fn rref_is_reduced() {
        let a = m(&[&[2, 4, 1], &[1, 2, 3]]);
        let (r, p) = rref(&a, 3);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r[0], vec![q(1), q(2), q(0)]);
        assert_eq!(r[1], vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[&[1, 2, 3, 4], &[0, 1, 1, 1]]);
        let k = kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let s: Q = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![q_frac(1, 2), q_frac(1, 3)], vec![q(3), q(2)]];
        assert_eq!(rank(&a, 2), 1);
    }

    #[test]
    fn intersection_and_sum() {
        let u = Subspace::span(3, &m(&[&[1, 0, 0], &[0, 1, 0]]));
        let w = Subspace::span(3, &m(&[&[0, 1, 0], &[0, 0, 1]]));
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[q(0), q(5), q(0)]));
        assert_eq!(u.sum(&w).dim(), 3);
        let comp = i.complement_in(&u);
        assert_eq!(comp.len(), 1);
        assert!(!i.contains(&comp[0]));
    }
}
