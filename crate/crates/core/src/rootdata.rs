//! Weight lattices and root systems given by a Cartan matrix.
//!
//! Conventions: weights are integer vectors in fundamental-weight
//! coordinates, and row `i` of the Cartan matrix holds the fundamental
//! coordinates of the simple root `α_i`, so `cartan[i][j] = ⟨α_i, α_j^∨⟩`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{bail, Result};
use crate::linalg;
use crate::rational::{fmt_q, is_nonneg_integer, q, to_i64, Q};

/// Upper bound on the number of positive roots generated before the Cartan
/// matrix is declared to be of non-finite type.
const MAX_POSITIVE_ROOTS: usize = 4096;

/// A weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum of the coordinates.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// A rational vector in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector(pub Vec<Q>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![Q::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RootVector(coords.iter().map(|&c| q(c)).collect())
    }

    /// Membership in `ℕΠ`: every coordinate a non-negative integer.
    pub fn in_root_cone_lattice(&self) -> bool {
        self.0.iter().all(is_nonneg_integer)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(to_i64).collect()
    }

    pub fn height(&self) -> Q {
        self.0.iter().sum()
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RootVector {
    /// Writes e.g. `α1+α2` or `2*α1-1/2*α3`; the zero vector is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            let a = c.abs();
            let coef = if a.is_one() { String::new() } else { format!("{}*", fmt_q(&a)) };
            out.push_str(&format!("{sign}{coef}α{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for RootVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(fmt_q).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|s| crate::rational::parse_q(s))
            .collect::<Result<Vec<Q>>>()
            .map(RootVector)
            .map_err(serde::de::Error::custom)
    }
}

/// A validated Cartan matrix with cached derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    label: String,
    cartan: Vec<Vec<i64>>,
    /// Rows of `(cartanᵀ)⁻¹`: maps fundamental coordinates to root coordinates.
    to_root: Vec<Vec<Q>>,
    /// `(α_i, α_i)/2` for the symmetrised invariant form.
    half_norms: Vec<Q>,
    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    positive_roots: Vec<Vec<i64>>,
}

impl RootDatum {
    /// Parses a type label such as `A3`, `B2`, `G2`, or an explicit matrix
    /// written row-wise as `2,-1;-1,2`.
    pub fn parse(input: &str) -> Result<Self> {
        let input = input.trim();
        if input.contains(',') || input.contains(';') || input.parse::<i64>().is_ok() {
            let rows: Result<Vec<Vec<i64>>> = input
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|t| match t.trim().parse::<i64>() {
                            Ok(v) => Ok(v),
                            Err(_) => bail!(Usage, "malformed Cartan matrix entry '{}'", t),
                        })
                        .collect()
                })
                .collect();
            return Self::from_cartan(rows?, None);
        }
        Self::from_label(input)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let mut chars = label.chars();
        let kind = chars.next().map(|c| c.to_ascii_uppercase());
        let n: usize = match chars.as_str().parse() {
            Ok(n) if n >= 1 => n,
            _ => bail!(Usage, "unrecognised root system label '{}'", label),
        };
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
            if i + 1 < n {
                row[i + 1] = -1;
            }
            if i > 0 {
                row[i - 1] = -1;
            }
        }
        match (kind, n) {
            (Some('A'), _) => {}
            // α_n short: ⟨α_{n-1}, α_n^∨⟩ = -2.
            (Some('B'), n) if n >= 2 => c[n - 2][n - 1] = -2,
            (Some('C'), n) if n >= 2 => c[n - 1][n - 2] = -2,
            (Some('D'), n) if n >= 4 => {
                c[n - 2][n - 1] = 0;
                c[n - 1][n - 2] = 0;
                c[n - 1][n - 3] = -1;
                c[n - 3][n - 1] = -1;
            }
            (Some('G'), 2) => c[0][1] = -3,
            _ => bail!(Usage, "unsupported root system label '{}'", label),
        }
        Self::from_cartan(c, Some(label.to_ascii_uppercase()))
    }

    pub fn from_cartan(cartan: Vec<Vec<i64>>, label: Option<String>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 {
            bail!(Validation, "Cartan matrix must have positive rank");
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                bail!(Validation, "Cartan matrix is not square");
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    bail!(Validation, "diagonal entry ({},{}) is {}, expected 2", i, j, a);
                }
                if i != j && a > 0 {
                    bail!(Validation, "off-diagonal entry ({},{}) is positive", i, j);
                }
                if i != j && (a == 0) != (cartan[j][i] == 0) {
                    bail!(Validation, "entries ({},{}) and ({},{}) disagree on vanishing", i, j, j, i);
                }
            }
        }
        let transposed: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| q(cartan[j][i])).collect())
            .collect();
        let to_root = invert(&transposed)
            .ok_or_else(|| crate::error::Error::Validation("Cartan matrix is singular".into()))?;
        let half_norms = symmetrizer(&cartan)?;
        let label = label.unwrap_or_else(|| "custom".to_string());
        let mut rd = RootDatum {
            label,
            cartan,
            to_root,
            half_norms,
            positive_roots: Vec::new(),
        };
        rd.positive_roots = rd.generate_positive_roots()?;
        Ok(rd)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// True when the Cartan matrix is the standard one of type `A_rank`.
    pub fn is_type_a(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let expect = if i == j {
                    2
                } else if i.abs_diff(j) == 1 {
                    -1
                } else {
                    0
                };
                self.cartan[i][j] == expect
            })
        })
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// The simple root `α_i` in fundamental coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    /// `ρ`, the half-sum of positive roots: all ones in fundamental coordinates.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            bail!(Validation, "weight {} has length {}, expected rank {}", w, w.rank(), self.rank());
        }
        Ok(())
    }

    /// Root coordinates of a weight: the solution of `cartanᵀ·x = λ`.
    pub fn to_root_coords(&self, w: &Weight) -> Result<RootVector> {
        self.check_rank(w)?;
        Ok(RootVector(
            self.to_root
                .iter()
                .map(|row| row.iter().zip(&w.0).map(|(a, &b)| a * q(b)).sum())
                .collect(),
        ))
    }

    /// Fundamental coordinates of an integral root-coordinate vector.
    pub fn from_root_coords(&self, r: &[i64]) -> Weight {
        let n = self.rank();
        Weight(
            (0..n)
                .map(|j| (0..n).map(|i| r[i] * self.cartan[i][j]).sum())
                .collect(),
        )
    }

    /// `μ ≤ λ` in dominance order: `λ - μ ∈ ℕΠ`.
    pub fn dominance_leq(&self, mu: &Weight, lam: &Weight) -> Result<bool> {
        self.check_rank(mu)?;
        self.check_rank(lam)?;
        Ok(self.to_root_coords(&(lam - mu))?.in_root_cone_lattice())
    }

    /// Applies the simple reflection `s_i(μ) = μ - μ_i α_i`.
    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        let k = mu.0[i];
        Weight(
            mu.0.iter()
                .zip(&self.cartan[i])
                .map(|(m, a)| m - k * a)
                .collect(),
        )
    }

    /// `w₀λ` for dominant `λ`, via reflections until anti-dominant.
    pub fn lowest_weight(&self, lam: &Weight) -> Result<Weight> {
        self.check_rank(lam)?;
        if !lam.is_dominant() {
            bail!(Precondition, "lowest_weight requires a dominant weight, got {}", lam);
        }
        let mut mu = lam.clone();
        let limit = self.positive_roots.len() + 1;
        for _ in 0..=limit {
            match mu.0.iter().position(|&c| c > 0) {
                Some(i) => mu = self.reflect(i, &mu),
                None => return Ok(mu),
            }
        }
        bail!(Inconsistent, "reflection algorithm exceeded {} steps", limit)
    }

    /// Reflects `μ` into the dominant chamber. Returns the dominant conjugate
    /// and the parity of the number of reflections used.
    pub fn to_dominant(&self, mu: &Weight) -> (Weight, bool) {
        let mut mu = mu.clone();
        let mut odd = false;
        while let Some(i) = mu.0.iter().position(|&c| c < 0) {
            mu = self.reflect(i, &mu);
            odd = !odd;
        }
        (mu, odd)
    }

    /// The symmetric invariant form on weights, normalised so that
    /// `(μ, α_i) = d_i μ_i` with `d_i = (α_i, α_i)/2`.
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        let x = self.to_root_coords(a).expect("rank checked by caller");
        x.0.iter()
            .zip(&self.half_norms)
            .zip(&b.0)
            .map(|((xi, di), &bi)| xi * di * q(bi))
            .sum()
    }

    /// `⟨μ, β^∨⟩` for a positive root `β` given in root coordinates.
    pub fn coroot_pairing(&self, mu: &Weight, beta: &[i64]) -> Q {
        let beta_w = self.from_root_coords(beta);
        let num: Q = beta
            .iter()
            .zip(&self.half_norms)
            .zip(&mu.0)
            .map(|((&c, d), &m)| q(c) * d * q(m))
            .sum();
        q(2) * num / self.inner(&beta_w, &beta_w)
    }

    fn generate_positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        let mut seen: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    // p = largest k with beta - k α_i a root.
                    let mut p = 0;
                    loop {
                        let mut cand = beta.clone();
                        cand[i] -= p + 1;
                        if cand[i] >= 0 && seen.contains(&cand) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..n).map(|j| beta[j] * self.cartan[j][i]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if seen.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            if seen.len() > MAX_POSITIVE_ROOTS {
                bail!(Validation, "Cartan matrix is not of finite type");
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        Ok(roots)
    }
}

fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = linalg::rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Finds `d` with `d_j a_ij = d_i a_ji`, propagating along the Dynkin graph.
fn symmetrizer(c: &[Vec<i64>]) -> Result<Vec<Q>> {
    let n = c.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                let dj = &di * q(c[j][i]) / q(c[i][j]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if *existing != dj => {
                        bail!(Validation, "Cartan matrix is not symmetrisable")
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(d.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use proptest::prelude::*;

    #[test]
    fn standard_labels() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert_eq!(a1.rank(), 1);
        assert_eq!(a1.cartan(), &[vec![2]]);
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(a2.cartan(), &[vec![2, -1], vec![-1, 2]]);
        assert!(a2.is_type_a());
        assert_eq!(RootDatum::parse("2,-1;-1,2").unwrap().cartan(), a2.cartan());
    }

    #[test]
    fn invalid_cartan_rejected() {
        assert!(matches!(
            RootDatum::parse("2,0;0,3"),
            Err(crate::error::Error::Validation(_))
        ));
        assert!(RootDatum::parse("2,1;1,2").is_err());
        assert!(RootDatum::parse("2,-2;-2,2").is_err());
        // affine A1^(1)
        assert!(RootDatum::parse("2,-2;-2,2").is_err());
    }

    #[test]
    fn positive_root_counts() {
        for (label, count) in [("A1", 1), ("A3", 6), ("B2", 4), ("C3", 9), ("G2", 6), ("D4", 12)] {
            assert_eq!(RootDatum::parse(label).unwrap().positive_roots().len(), count, "{label}");
        }
    }

    #[test]
    fn root_coordinates() {
        let a1 = RootDatum::parse("A1").unwrap();
        assert_eq!(a1.to_root_coords(&Weight(vec![3])).unwrap(), RootVector(vec![q_frac(3, 2)]));
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(
            a2.to_root_coords(&Weight(vec![1, 0])).unwrap(),
            RootVector(vec![q_frac(2, 3), q_frac(1, 3)])
        );
        assert!(a2.to_root_coords(&Weight::zero(2)).unwrap().is_zero());
        assert!(a2.to_root_coords(&Weight(vec![1])).is_err());
    }

    #[test]
    fn dominance_examples() {
        let a1 = RootDatum::parse("A1").unwrap();
        assert!(a1.dominance_leq(&Weight(vec![0]), &Weight(vec![2])).unwrap());
        assert!(!a1.dominance_leq(&Weight(vec![0]), &Weight(vec![1])).unwrap());
        let a2 = RootDatum::parse("A2").unwrap();
        assert!(!a2.dominance_leq(&Weight(vec![0, 1]), &Weight(vec![1, 0])).unwrap());
        assert!(a2.dominance_leq(&Weight(vec![0, 0]), &Weight(vec![1, 1])).unwrap());
    }

    #[test]
    fn lowest_weights() {
        let a1 = RootDatum::parse("A1").unwrap();
        assert_eq!(a1.lowest_weight(&Weight(vec![5])).unwrap(), Weight(vec![-5]));
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(a2.lowest_weight(&Weight(vec![1, 0])).unwrap(), Weight(vec![0, -1]));
        let a3 = RootDatum::parse("A3").unwrap();
        assert_eq!(a3.lowest_weight(&Weight(vec![0, 1, 0])).unwrap(), Weight(vec![0, -1, 0]));
        assert!(a3.lowest_weight(&Weight(vec![0, -1, 0])).is_err());
    }

    #[test]
    fn simple_roots_have_unit_root_coordinates() {
        for label in ["A3", "B3", "C2", "G2", "D4"] {
            let rd = RootDatum::parse(label).unwrap();
            for i in 0..rd.rank() {
                let r = rd.to_root_coords(&rd.simple_root(i)).unwrap();
                let expect = (0..rd.rank()).map(|j| if i == j { 1 } else { 0 }).collect::<Vec<_>>();
                assert_eq!(r, RootVector::from_ints(&expect));
            }
        }
    }

    #[test]
    fn display_root_vector() {
        assert_eq!(RootVector::from_ints(&[1, 1, 0]).to_string(), "α1+α2");
        assert_eq!(RootVector::from_ints(&[0, 0]).to_string(), "0");
        assert_eq!(RootVector(vec![q(2), q_frac(-1, 2)]).to_string(), "2*α1-1/2*α2");
    }

    fn weight_strategy(rank: usize) -> impl Strategy<Value = Weight> {
        proptest::collection::vec(-4i64..5, rank).prop_map(Weight)
    }

    proptest! {
        #[test]
        fn dominance_is_a_partial_order(
            a in weight_strategy(2), b in weight_strategy(2), c in weight_strategy(2)
        ) {
            let rd = RootDatum::parse("A2").unwrap();
            prop_assert!(rd.dominance_leq(&a, &a).unwrap());
            if rd.dominance_leq(&a, &b).unwrap() && rd.dominance_leq(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if rd.dominance_leq(&a, &b).unwrap() && rd.dominance_leq(&b, &c).unwrap() {
                prop_assert!(rd.dominance_leq(&a, &c).unwrap());
            }
        }

        #[test]
        fn lowest_weight_involution(coords in proptest::collection::vec(0i64..5, 3), label in 0usize..3) {
            let rd = RootDatum::parse(["A3", "B3", "C3"][label]).unwrap();
            let lam = Weight(coords);
            let low = rd.lowest_weight(&lam).unwrap();
            prop_assert_eq!(rd.lowest_weight(&-&low).unwrap(), -&lam);
            prop_assert!(rd.dominance_leq(&low, &lam).unwrap());
        }
    }
}
