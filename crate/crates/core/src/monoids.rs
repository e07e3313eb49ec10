//! Finitely generated submonoids of the weight lattice and of `ℕΠ`:
//! bounded membership, saturation (Hilbert bases), freeness, and binomial
//! presentations of the monoid algebra.
//!
//! All generators must have non-negative coordinates in their own basis, so
//! every monoid here is pointed and the coordinate sum is a positive grading.

use std::collections::{BTreeMap, HashSet};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::linalg;
use crate::rational::{q, to_i64, Q};
use crate::rootdata::{RootDatum, RootVector, Weight};

pub const MAX_SATURATION_RANK: usize = 3;
const MAX_PARALLELEPIPED_POINTS: i128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonoidBasis {
    Fundamental,
    Root,
}

/// A submonoid of the weight lattice, generators in fundamental coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMonoid {
    rd: RootDatum,
    generators: Vec<Weight>,
}

/// A submonoid of `ℕΠ`, generators in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootMonoid {
    rd: RootDatum,
    generators: Vec<Vec<i64>>,
    /// Set when the generators come from a truncated computation.
    pub bound_limited: bool,
}

/// JSON form shared by both monoid kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidJson {
    pub generators: Vec<Vec<i64>>,
    pub basis: MonoidBasis,
}

fn check_gens(rd: &RootDatum, gens: &[Vec<i64>]) -> Result<()> {
    let mut seen = HashSet::new();
    for g in gens {
        if g.len() != rd.rank() {
            bail!(Validation, "generator {:?} has length {}, expected {}", g, g.len(), rd.rank());
        }
        if g.iter().any(|&c| c < 0) {
            bail!(Validation, "generator {:?} has a negative coordinate", g);
        }
        if !seen.insert(g.clone()) {
            bail!(Validation, "generator {:?} is repeated", g);
        }
    }
    Ok(())
}

impl WeightMonoid {
    pub fn new(rd: &RootDatum, generators: Vec<Weight>) -> Result<Self> {
        let raw: Vec<Vec<i64>> = generators.iter().map(|w| w.0.clone()).collect();
        check_gens(rd, &raw)?;
        Ok(WeightMonoid {
            rd: rd.clone(),
            generators,
        })
    }

    /// `ℕ·n ⊂ Λ` for `SL(2)`.
    pub fn a1_multiples(n: i64) -> Result<Self> {
        let rd = RootDatum::from_label("A1")?;
        Self::new(&rd, vec![Weight(vec![n])])
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }

    pub fn generators(&self) -> &[Weight] {
        &self.generators
    }

    fn raw(&self) -> Vec<Vec<i64>> {
        self.generators.iter().map(|w| w.0.clone()).collect()
    }

    pub fn contains(&self, target: &Weight, bound: u64) -> Result<Membership> {
        self.rd.check_rank(target)?;
        Ok(membership(&self.raw(), &target.0, bound))
    }

    /// Elements of level (coordinate sum) at most `max_level`, sorted.
    pub fn elements_up_to(&self, max_level: i64) -> Vec<Weight> {
        elements_up_to(&self.raw(), self.rd.rank(), max_level)
            .into_iter()
            .map(Weight)
            .collect()
    }

    pub fn saturation(&self) -> Result<WeightMonoid> {
        let mut hb = saturation(&self.raw())?;
        let rd = &self.rd;
        hb.sort_by_key(|g| rd.to_root_coords(&Weight(g.clone())).map(|r| r.0).unwrap_or_default());
        WeightMonoid::new(rd, hb.into_iter().map(Weight).collect())
    }

    pub fn minimal_generators(&self) -> Vec<Weight> {
        minimal_generators(&self.raw()).into_iter().map(Weight).collect()
    }

    pub fn is_free(&self) -> Result<bool> {
        is_free(&self.raw())
    }

    pub fn presentation(&self, degree_bound: u32) -> Result<Presentation> {
        presentation(&self.raw(), degree_bound)
    }

    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            generators: self.raw(),
            basis: MonoidBasis::Fundamental,
        }
    }
}

impl RootMonoid {
    pub fn new(rd: &RootDatum, generators: Vec<Vec<i64>>) -> Result<Self> {
        check_gens(rd, &generators)?;
        Ok(RootMonoid {
            rd: rd.clone(),
            generators,
            bound_limited: false,
        })
    }

    pub fn from_root_vectors(rd: &RootDatum, gens: &[RootVector]) -> Result<Self> {
        let raw = gens
            .iter()
            .map(|g| match g.to_ints() {
                Some(v) if g.in_root_cone_lattice() => Ok(v),
                _ => bail!(Validation, "root monoid generator {} is not in ℕΠ", g),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rd, raw)
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn root_vectors(&self) -> Vec<RootVector> {
        self.generators.iter().map(|g| RootVector::from_ints(g)).collect()
    }

    pub fn contains(&self, target: &[i64], bound: u64) -> Membership {
        membership(&self.generators, target, bound)
    }

    pub fn saturation(&self) -> Result<RootMonoid> {
        let mut m = RootMonoid::new(&self.rd, saturation(&self.generators)?)?;
        m.bound_limited = self.bound_limited;
        Ok(m)
    }

    pub fn minimal_generators(&self) -> Vec<Vec<i64>> {
        minimal_generators(&self.generators)
    }

    pub fn is_free(&self) -> Result<bool> {
        is_free(&self.generators)
    }

    pub fn presentation(&self, degree_bound: u32) -> Result<Presentation> {
        presentation(&self.generators, degree_bound)
    }

    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            generators: self.generators.clone(),
            basis: MonoidBasis::Root,
        }
    }
}

/// Outcome of a bounded membership search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Coefficients of the generators, when `member` is true.
    pub certificate: Option<Vec<u64>>,
    /// True when the answer is "no" only because of the coefficient bound.
    pub bound_limited: bool,
}

fn level(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Is `target` an ℕ-combination of `gens` with coefficient sum ≤ `bound`?
pub fn membership(gens: &[Vec<i64>], target: &[i64], bound: u64) -> Membership {
    let gens_nz: Vec<(usize, &Vec<i64>)> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| g.iter().any(|&c| c != 0))
        .collect();
    // Coordinate sums are positive on every nonzero generator, so a target
    // of level L needs at most L / min_level summands.
    let min_level = gens_nz.iter().map(|(_, g)| level(g)).min().unwrap_or(1).max(1);
    let needed = (level(target).max(0) / min_level) as u64;
    let effective = bound.min(needed);

    fn dfs(
        gens: &[(usize, &Vec<i64>)],
        k: usize,
        rest: &mut Vec<i64>,
        budget: u64,
        coef: &mut Vec<u64>,
    ) -> bool {
        if rest.iter().all(|&c| c == 0) {
            return true;
        }
        if k == gens.len() || rest.iter().any(|&c| c < 0) {
            return false;
        }
        let g = gens[k].1;
        let mut used = 0;
        loop {
            if dfs(gens, k + 1, rest, budget - used, coef) {
                coef[gens[k].0] = used;
                return true;
            }
            if used == budget {
                break;
            }
            for (r, c) in rest.iter_mut().zip(g) {
                *r -= c;
            }
            used += 1;
            if rest.iter().any(|&c| c < 0) {
                break;
            }
        }
        for (r, c) in rest.iter_mut().zip(g) {
            *r += c * used as i64;
        }
        false
    }

    let mut rest = target.to_vec();
    let mut coef = vec![0u64; gens.len()];
    if target.iter().any(|&c| c < 0) {
        return Membership {
            member: false,
            certificate: None,
            bound_limited: false,
        };
    }
    if dfs(&gens_nz, 0, &mut rest, effective, &mut coef) {
        Membership {
            member: true,
            certificate: Some(coef),
            bound_limited: false,
        }
    } else {
        Membership {
            member: false,
            certificate: None,
            bound_limited: bound < needed,
        }
    }
}

/// Monoid elements of level at most `max_level`, sorted by (level, coords).
pub fn elements_up_to(gens: &[Vec<i64>], rank: usize, max_level: i64) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut stack = vec![vec![0; rank]];
    seen.insert(vec![0; rank]);
    while let Some(v) = stack.pop() {
        for g in gens {
            if g.iter().all(|&c| c == 0) {
                continue;
            }
            let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + b).collect();
            if level(&w) <= max_level && seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort_by_key(|v| (level(v), v.clone()));
    out
}

/// Removes generators that are sums of the others.
pub fn minimal_generators(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut sorted: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&c| c != 0)).cloned().collect();
    sorted.sort_by_key(|g| (level(g), g.clone()));
    sorted.dedup();
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for g in sorted {
        if !membership(&kept, &g, u64::MAX).member {
            kept.push(g);
        }
    }
    kept
}

pub fn is_free(gens: &[Vec<i64>]) -> Result<bool> {
    let min = minimal_generators(gens);
    let rows: Vec<Vec<Q>> = min.iter().map(|g| g.iter().map(|&c| q(c)).collect()).collect();
    let ncols = gens.first().map_or(0, Vec::len);
    Ok(linalg::rank(&rows, ncols) == min.len())
}

/// Integer row-style Hermite reduction: a basis of the lattice spanned by `rows`.
fn lattice_basis(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&c| c as i128).collect()).collect();
    let mut basis = Vec::new();
    for c in 0..ncols {
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            let pivot = m[p].clone();
            for &i in &nz {
                if i != p {
                    let f = m[i][c] / pivot[c];
                    for (x, y) in m[i].iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(p) = (0..m.len()).find(|&i| m[i][c] != 0) {
            let mut row = m.remove(p);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(row);
        }
        m.retain(|r| r.iter().any(|&x| x != 0));
    }
    basis
}

/// Coordinates of `v` in the lattice basis `b` (rows), assumed to exist.
fn lattice_coords(b: &[Vec<i128>], v: &[i64]) -> Vec<i64> {
    let k = b.len();
    let rows: Vec<Vec<Q>> = (0..v.len())
        .map(|col| {
            let mut r: Vec<Q> = b.iter().map(|row| Q::from_integer(row[col].into())).collect();
            r.push(q(v[col]));
            r
        })
        .collect();
    let (red, pivots) = linalg::rref(&rows, k + 1);
    let mut x = vec![0i64; k];
    for (row, &p) in red.iter().zip(&pivots) {
        debug_assert!(p < k, "vector outside the lattice span");
        x[p] = to_i64(&row[k]).expect("vector outside the lattice");
    }
    x
}

fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        1 => m[0][0] as i128,
        2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
        3 => {
            let a = |i: usize, j: usize| m[i][j] as i128;
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        }
        _ => unreachable!("rank capped at 3"),
    }
}

/// Rational coordinates of `p` with respect to the rows of the square,
/// invertible `cone`.
fn cone_coords(cone: &[Vec<i64>], p: &[i64]) -> Vec<Q> {
    let k = cone.len();
    let rows: Vec<Vec<Q>> = (0..k)
        .map(|col| {
            let mut r: Vec<Q> = cone.iter().map(|v| q(v[col])).collect();
            r.push(q(p[col]));
            r
        })
        .collect();
    let (red, _) = linalg::rref(&rows, k + 1);
    red.iter().map(|row| row[k].clone()).collect()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Hilbert basis of `cone(gens) ∩ lattice(gens)`, sorted lexicographically.
pub fn saturation(gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let gens: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&c| c != 0)).cloned().collect();
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    if gens.iter().any(|g| g.iter().any(|&c| c < 0)) {
        bail!(Validation, "saturation requires generators with non-negative coordinates");
    }
    let basis = lattice_basis(&gens);
    let k = basis.len();
    if k > MAX_SATURATION_RANK {
        bail!(Resource, "lattice rank {} exceeds the saturation cap {}", k, MAX_SATURATION_RANK);
    }
    let local: Vec<Vec<i64>> = gens.iter().map(|g| lattice_coords(&basis, g)).collect();

    let cones: Vec<Vec<Vec<i64>>> = subsets_of_size(local.len(), k)
        .into_iter()
        .map(|s| s.iter().map(|&i| local[i].clone()).collect::<Vec<_>>())
        .filter(|c| det(c) != 0)
        .collect();
    let in_cone = |p: &[i64]| {
        cones
            .iter()
            .any(|c| cone_coords(c, p).iter().all(|t| !t.is_negative()))
    };

    let mut candidates: Vec<Vec<i64>> = local.clone();
    for cone in &cones {
        let d = det(cone).abs();
        if d > MAX_PARALLELEPIPED_POINTS {
            bail!(Resource, "fundamental parallelepiped has {} points", d);
        }
        // Bounding box of the parallelepiped spanned by the cone generators.
        let mut lo = vec![0i64; k];
        let mut hi = vec![0i64; k];
        for v in cone {
            for j in 0..k {
                if v[j] < 0 {
                    lo[j] += v[j];
                } else {
                    hi[j] += v[j];
                }
            }
        }
        let volume: i128 = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as i128).product();
        if volume > MAX_PARALLELEPIPED_POINTS {
            bail!(Resource, "parallelepiped bounding box has {} points", volume);
        }
        let mut p = lo.clone();
        loop {
            let t = cone_coords(cone, &p);
            if t.iter().all(|x| !x.is_negative() && *x < q(1)) && p.iter().any(|&c| c != 0) {
                candidates.push(p.clone());
            }
            let mut j = 0;
            loop {
                if j == k {
                    break;
                }
                if p[j] < hi[j] {
                    p[j] += 1;
                    break;
                }
                p[j] = lo[j];
                j += 1;
            }
            if j == k {
                break;
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let irreducible: Vec<Vec<i64>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|y| {
                if y == *x {
                    return false;
                }
                let d: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                d.iter().any(|&c| c != 0) && in_cone(&d)
            })
        })
        .cloned()
        .collect();
    let mut out: Vec<Vec<i64>> = irreducible
        .iter()
        .map(|y| {
            (0..gens[0].len())
                .map(|col| {
                    let s: i128 = y.iter().zip(&basis).map(|(c, b)| *c as i128 * b[col]).sum();
                    s as i64
                })
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A binomial relation `g^lhs = g^rhs` between monoid generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

impl Relation {
    pub fn render(&self) -> String {
        let side = |e: &[u32]| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("g{}", i + 1) } else { format!("g{}^{}", i + 1, k) })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        format!("{} = {}", side(&self.lhs), side(&self.rhs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub relations: Vec<Relation>,
    pub degree_bound: u32,
    pub bound_limited: bool,
}

fn exponent_vectors(m: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    rec(m, max_deg, &mut Vec::new(), &mut out);
    out
}

/// Minimal binomial relations among the generators, among all monomials of
/// total degree at most `degree_bound`.
pub fn presentation(gens: &[Vec<i64>], degree_bound: u32) -> Result<Presentation> {
    if degree_bound < 2 {
        bail!(Precondition, "presentation degree bound must be at least 2");
    }
    let rank = gens.first().map_or(0, Vec::len);
    let weight_of = |e: &[u32]| -> Vec<i64> {
        (0..rank)
            .map(|c| e.iter().zip(gens).map(|(&k, g)| k as i64 * g[c]).sum())
            .collect()
    };
    let mut fibers: BTreeMap<(i64, Vec<i64>), Vec<Vec<u32>>> = BTreeMap::new();
    for e in exponent_vectors(gens.len(), degree_bound) {
        let w = weight_of(&e);
        fibers.entry((level(&w), w)).or_default().push(e);
    }
    let mut relations: Vec<Relation> = Vec::new();
    for (_, mut fiber) in fibers {
        if fiber.len() < 2 {
            continue;
        }
        fiber.sort_by(|a, b| b.cmp(a));
        let pos: BTreeMap<Vec<u32>, usize> = fiber.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        // Connected components of the fiber under the relations found so far.
        let mut comp = vec![usize::MAX; fiber.len()];
        let mut ncomp = 0;
        for start in 0..fiber.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = ncomp;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for r in &relations {
                    for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                        if fiber[i].iter().zip(from.iter()).all(|(a, b)| a >= b) {
                            let moved: Vec<u32> = fiber[i]
                                .iter()
                                .zip(from.iter().zip(to.iter()))
                                .map(|(a, (f, t))| a - f + t)
                                .collect();
                            if let Some(&j) = pos.get(&moved) {
                                if comp[j] == usize::MAX {
                                    comp[j] = ncomp;
                                    stack.push(j);
                                }
                            }
                        }
                    }
                }
            }
            ncomp += 1;
        }
        for c in 1..ncomp {
            let rep = comp.iter().position(|&x| x == c).unwrap();
            relations.push(Relation {
                lhs: fiber[0].clone(),
                rhs: fiber[rep].clone(),
            });
        }
    }
    let free = is_free(gens)? && minimal_generators(gens).len() == gens.len();
    Ok(Presentation {
        relations,
        degree_bound,
        bound_limited: !free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a1() -> RootDatum {
        RootDatum::from_label("A1").unwrap()
    }

    fn wm(gens: &[i64]) -> WeightMonoid {
        WeightMonoid::new(&a1(), gens.iter().map(|&g| Weight(vec![g])).collect()).unwrap()
    }

    #[test]
    fn numerical_semigroup_membership() {
        let m = wm(&[2, 3]);
        let r = m.contains(&Weight(vec![7]), 5).unwrap();
        assert!(r.member);
        let c = r.certificate.unwrap();
        assert_eq!(c[0] * 2 + c[1] * 3, 7);
        let r = m.contains(&Weight(vec![1]), 5).unwrap();
        assert!(!r.member && !r.bound_limited);
        let r = m.contains(&Weight(vec![9]), 2).unwrap();
        assert!(!r.member && r.bound_limited);
    }

    #[test]
    fn root_monoid_membership() {
        let a3 = RootDatum::from_label("A3").unwrap();
        let m = RootMonoid::new(&a3, vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let r = m.contains(&[1, 2, 1], 4);
        assert_eq!(r.certificate, Some(vec![1, 1]));
        assert!(!m.contains(&[1, 0, 0], 4).member);
        assert!(RootMonoid::from_root_vectors(&a3, &[RootVector(vec![q(1), crate::rational::q_frac(1, 2), q(0)])]).is_err());
    }

    #[test]
    fn constructor_invariants() {
        assert!(WeightMonoid::new(&a1(), vec![Weight(vec![2]), Weight(vec![2])]).is_err());
        assert!(WeightMonoid::new(&a1(), vec![Weight(vec![-1])]).is_err());
    }

    #[test]
    fn saturations() {
        assert_eq!(wm(&[2, 3]).saturation().unwrap().generators(), &[Weight(vec![1])]);
        let a1 = a1();
        let m = RootMonoid::new(&a1, vec![vec![2]]).unwrap();
        assert_eq!(m.saturation().unwrap().generators(), &[vec![2]]);
        let a3 = RootDatum::from_label("A3").unwrap();
        let m = RootMonoid::new(&a3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]]).unwrap();
        assert_eq!(m.saturation().unwrap().generators(), &[vec![0, 1, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn saturation_adds_interior_points() {
        let hb = saturation(&[vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(hb, vec![vec![1, 0], vec![1, 2]]);
        let hb = saturation(&[vec![1, 0], vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(hb, vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        // lattice generated by (2,0),(0,2),(1,1) is index 2; saturation keeps all three.
        let hb = saturation(&[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(hb, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn rank_cap() {
        let gens: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
        assert!(matches!(saturation(&gens), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn freeness() {
        let a1 = a1();
        assert!(RootMonoid::new(&a1, vec![vec![2]]).unwrap().is_free().unwrap());
        let a3 = RootDatum::from_label("A3").unwrap();
        assert!(RootMonoid::new(&a3, vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap().is_free().unwrap());
        let m = wm(&[2, 3]);
        assert!(!m.is_free().unwrap());
        assert!(m.saturation().unwrap().is_free().unwrap());
    }

    #[test]
    fn presentations() {
        let p = wm(&[2, 3]).presentation(3).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].render(), "g1^3 = g2^2");
        assert!(p.bound_limited);
        let a2 = RootDatum::from_label("A2").unwrap();
        let free = WeightMonoid::new(&a2, vec![Weight(vec![1, 0]), Weight(vec![0, 1])]).unwrap();
        let p = free.presentation(4).unwrap();
        assert!(p.relations.is_empty() && !p.bound_limited);
        let p = wm(&[2, 3, 5]).presentation(3).unwrap();
        assert!(p.relations.iter().any(|r| r.render() == "g1*g2 = g3"));
        assert!(wm(&[2]).presentation(1).is_err());
    }

    #[test]
    fn elements_window() {
        let els = wm(&[2, 3]).elements_up_to(7);
        let vals: Vec<i64> = els.iter().map(|w| w.0[0]).collect();
        assert_eq!(vals, vec![0, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&wm(&[2, 3]).to_json()).unwrap();
        assert_eq!(j, r#"{"generators":[[2],[3]],"basis":"fundamental"}"#);
    }

    proptest! {
        #[test]
        fn saturation_is_idempotent(gens in proptest::collection::btree_set((0i64..5, 0i64..5), 1..4)) {
            let gens: Vec<Vec<i64>> = gens.into_iter().map(|(a, b)| vec![a, b]).filter(|g| g != &vec![0, 0]).collect();
            prop_assume!(!gens.is_empty());
            let once = saturation(&gens).unwrap();
            let twice = saturation(&once).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn certificates_evaluate_to_target(
            gens in proptest::collection::btree_set((0i64..4, 0i64..4), 1..4),
            target in (0i64..9, 0i64..9),
        ) {
            let gens: Vec<Vec<i64>> = gens.into_iter().map(|(a, b)| vec![a, b]).collect();
            let t = vec![target.0, target.1];
            let r = membership(&gens, &t, 20);
            if let Some(c) = r.certificate {
                let s: Vec<i64> = (0..2).map(|k| c.iter().zip(&gens).map(|(&x, g)| x as i64 * g[k]).sum()).collect();
                prop_assert_eq!(s, t);
            }
        }
    }
}
