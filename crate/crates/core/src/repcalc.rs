//! Character-level calculators: dimensions, weight multiplicities, and
//! tensor-product decompositions of simple modules.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{bail, Result};
use crate::rational::{q, to_i64, Q};
use crate::rootdata::{RootDatum, Weight};

pub const DEFAULT_DIM_CAP: u64 = 10_000;

/// Below this product of dimensions `tensor_decompose` peels characters;
/// above it the Brauer–Klimyk sum is used.
pub const PEELING_THRESHOLD: u64 = 400;

/// Weight multiplicities of one simple module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacterTable {
    pub entries: BTreeMap<Weight, u64>,
}

impl CharacterTable {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn mult(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }
}

/// Multiplicities of the simple summands of a module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub summands: BTreeMap<Weight, u64>,
}

impl Decomposition {
    pub fn mult(&self, w: &Weight) -> u64 {
        self.summands.get(w).copied().unwrap_or(0)
    }
}

fn serialize_weight_map<S: Serializer>(m: &BTreeMap<Weight, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m.iter().rev() {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

impl Serialize for Decomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_weight_map(&self.summands, s)
    }
}

impl Serialize for CharacterTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_weight_map(&self.entries, s)
    }
}

fn require_dominant(rd: &RootDatum, lam: &Weight) -> Result<()> {
    rd.check_rank(lam)?;
    if !lam.is_dominant() {
        bail!(Precondition, "weight {} is not dominant", lam);
    }
    Ok(())
}

/// `dim V(λ) = ∏_{β>0} ⟨λ+ρ, β^∨⟩ / ⟨ρ, β^∨⟩`.
pub fn weyl_dim(rd: &RootDatum, lam: &Weight) -> Result<u64> {
    require_dominant(rd, lam)?;
    let shifted = lam + &rd.rho();
    let rho = rd.rho();
    let mut prod = q(1);
    for beta in rd.positive_roots() {
        prod *= rd.coroot_pairing(&shifted, beta) / rd.coroot_pairing(&rho, beta);
    }
    match to_i64(&prod) {
        Some(d) if d > 0 => Ok(d as u64),
        _ => bail!(Inconsistent, "Weyl dimension of {} evaluated to {}", lam, prod),
    }
}

/// Weight multiplicities of `V(λ)` by Freudenthal's recursion, processed in
/// layers of increasing depth below `λ`.
pub fn weight_multiplicities(rd: &RootDatum, lam: &Weight, cap: u64) -> Result<CharacterTable> {
    let dim = weyl_dim(rd, lam)?;
    if dim > cap {
        bail!(Resource, "dim V{} = {} exceeds cap {}", lam, dim, cap);
    }
    let rho = rd.rho();
    let top = {
        let s = lam + &rho;
        rd.inner(&s, &s)
    };
    let roots: Vec<Weight> = rd
        .positive_roots()
        .iter()
        .map(|b| rd.from_root_coords(b))
        .collect();
    let simple: Vec<Weight> = (0..rd.rank()).map(|i| rd.simple_root(i)).collect();

    let mut mult: HashMap<Weight, u64> = HashMap::new();
    mult.insert(lam.clone(), 1);
    let mut layer = vec![lam.clone()];
    while !layer.is_empty() {
        let mut candidates: Vec<Weight> = layer
            .iter()
            .flat_map(|nu| simple.iter().map(move |a| nu - a))
            .collect();
        candidates.sort();
        candidates.dedup();
        let mut next = Vec::new();
        for mu in candidates {
            let denom = {
                let s = &mu + &rho;
                &top - rd.inner(&s, &s)
            };
            if !denom.is_positive() {
                continue;
            }
            let mut num = Q::zero();
            for beta in &roots {
                let mut shifted = &mu + beta;
                while let Some(&m) = mult.get(&shifted) {
                    num += q(m as i64) * rd.inner(&shifted, beta);
                    shifted = &shifted + beta;
                }
            }
            let m = q(2) * num / denom;
            match to_i64(&m) {
                Some(0) => {}
                Some(k) if k > 0 => {
                    mult.insert(mu.clone(), k as u64);
                    next.push(mu);
                }
                _ => bail!(Inconsistent, "non-integral multiplicity {} at {}", m, mu),
            }
        }
        layer = next;
    }
    let table = CharacterTable {
        entries: mult.into_iter().collect(),
    };
    if table.total() != dim {
        bail!(Inconsistent, "character of V{} sums to {} but dim is {}", lam, table.total(), dim);
    }
    Ok(table)
}

fn check_product_cap(rd: &RootDatum, lam: &Weight, mu: &Weight, cap: u64) -> Result<(u64, u64)> {
    let (a, b) = (weyl_dim(rd, lam)?, weyl_dim(rd, mu)?);
    if a.saturating_mul(b) > cap {
        bail!(Resource, "dim V{} ⊗ V{} = {} exceeds cap {}", lam, mu, a.saturating_mul(b), cap);
    }
    Ok((a, b))
}

/// Decomposes `V(λ) ⊗ V(μ)` into simple modules.
pub fn tensor_decompose(rd: &RootDatum, lam: &Weight, mu: &Weight, cap: u64) -> Result<Decomposition> {
    require_dominant(rd, lam)?;
    require_dominant(rd, mu)?;
    let (a, b) = check_product_cap(rd, lam, mu, cap)?;
    if a * b <= PEELING_THRESHOLD {
        tensor_decompose_peeling(rd, lam, mu, cap)
    } else {
        tensor_decompose_brauer_klimyk(rd, lam, mu, cap)
    }
}

/// Multiplies the two characters and repeatedly strips off the character of
/// the simple module whose highest weight is the highest remaining weight.
pub fn tensor_decompose_peeling(rd: &RootDatum, lam: &Weight, mu: &Weight, cap: u64) -> Result<Decomposition> {
    require_dominant(rd, lam)?;
    require_dominant(rd, mu)?;
    check_product_cap(rd, lam, mu, cap)?;
    let (cl, cm) = (
        weight_multiplicities(rd, lam, cap)?,
        weight_multiplicities(rd, mu, cap)?,
    );
    let mut remaining: HashMap<Weight, i64> = HashMap::new();
    for (w1, m1) in &cl.entries {
        for (w2, m2) in &cm.entries {
            *remaining.entry(w1 + w2).or_default() += (m1 * m2) as i64;
        }
    }
    let height = |w: &Weight| rd.to_root_coords(w).expect("rank checked").height();
    let mut out = Decomposition::default();
    loop {
        remaining.retain(|_, m| *m != 0);
        let Some(top) = remaining
            .keys()
            .max_by(|x, y| height(x).cmp(&height(y)).then_with(|| x.cmp(y)))
            .cloned()
        else {
            break;
        };
        let m = remaining[&top];
        if m < 0 || !top.is_dominant() {
            bail!(Inconsistent, "peeling reached weight {} with multiplicity {}", top, m);
        }
        for (w, k) in weight_multiplicities(rd, &top, cap)?.entries {
            *remaining.entry(w).or_default() -= m * k as i64;
        }
        out.summands.insert(top, m as u64);
    }
    Ok(out)
}

/// Brauer–Klimyk: `Σ_{w ∈ wt V(μ)} m_μ(w) · ε · V(dom(λ + w + ρ) - ρ)`, with
/// terms on a reflecting wall discarded. Iterates over the smaller factor.
pub fn tensor_decompose_brauer_klimyk(
    rd: &RootDatum,
    lam: &Weight,
    mu: &Weight,
    cap: u64,
) -> Result<Decomposition> {
    require_dominant(rd, lam)?;
    require_dominant(rd, mu)?;
    let (a, b) = check_product_cap(rd, lam, mu, cap)?;
    let (big, small) = if a >= b { (lam, mu) } else { (mu, lam) };
    let rho = rd.rho();
    let shifted = big + &rho;
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, m) in weight_multiplicities(rd, small, cap)?.entries {
        let (dom, odd) = rd.to_dominant(&(&shifted + &w));
        if dom.0.iter().any(|&c| c == 0) {
            continue;
        }
        let sign = if odd { -1 } else { 1 };
        *acc.entry(&dom - &rho).or_default() += sign * m as i64;
    }
    let mut out = Decomposition::default();
    for (w, m) in acc {
        match m {
            0 => {}
            m if m > 0 => {
                out.summands.insert(w, m as u64);
            }
            _ => bail!(Inconsistent, "negative Brauer–Klimyk multiplicity at {}", w),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight(c.to_vec())
    }

    #[test]
    fn dimensions() {
        let a1 = RootDatum::parse("A1").unwrap();
        for n in 0..8 {
            assert_eq!(weyl_dim(&a1, &w(&[n])).unwrap(), n as u64 + 1);
        }
        let a2 = RootDatum::parse("A2").unwrap();
        assert_eq!(weyl_dim(&a2, &w(&[1, 1])).unwrap(), 8);
        assert_eq!(weyl_dim(&a2, &w(&[0, 0])).unwrap(), 1);
        let g2 = RootDatum::parse("G2").unwrap();
        let dims: Vec<u64> = [[1, 0], [0, 1]].iter().map(|c| weyl_dim(&g2, &w(c)).unwrap()).collect();
        let mut sorted = dims.clone();
        sorted.sort();
        assert_eq!(sorted, vec![7, 14]);
        assert!(weyl_dim(&a2, &w(&[-1, 0])).is_err());
    }

    #[test]
    fn a1_string() {
        let a1 = RootDatum::parse("A1").unwrap();
        let t = weight_multiplicities(&a1, &w(&[4]), DEFAULT_DIM_CAP).unwrap();
        let expect: BTreeMap<Weight, u64> = [4, 2, 0, -2, -4].iter().map(|&k| (w(&[k]), 1)).collect();
        assert_eq!(t.entries, expect);
    }

    #[test]
    fn adjoint_a2_zero_weight() {
        let a2 = RootDatum::parse("A2").unwrap();
        let t = weight_multiplicities(&a2, &w(&[1, 1]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(t.mult(&w(&[0, 0])), 2);
        assert_eq!(t.entries.len(), 7);
        let triv = weight_multiplicities(&a2, &w(&[0, 0]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(triv.entries, [(w(&[0, 0]), 1)].into_iter().collect());
    }

    #[test]
    fn cap_is_enforced() {
        let a2 = RootDatum::parse("A2").unwrap();
        let err = weight_multiplicities(&a2, &w(&[5, 5]), 100).unwrap_err();
        assert!(matches!(err, crate::Error::Resource(_)));
        let err = tensor_decompose(&a2, &w(&[3, 3]), &w(&[3, 3]), 1000).unwrap_err();
        assert!(matches!(err, crate::Error::Resource(_)));
    }

    #[test]
    fn character_is_weyl_symmetric() {
        for (label, lam) in [("A2", vec![2, 1]), ("B2", vec![1, 2]), ("G2", vec![1, 1])] {
            let rd = RootDatum::parse(label).unwrap();
            let t = weight_multiplicities(&rd, &w(&lam), DEFAULT_DIM_CAP).unwrap();
            for (mu, m) in &t.entries {
                for i in 0..rd.rank() {
                    assert_eq!(t.mult(&rd.reflect(i, mu)), *m, "{label} {mu}");
                }
                assert!(rd.dominance_leq(mu, &w(&lam)).unwrap());
            }
            assert_eq!(t.mult(&w(&lam)), 1);
        }
    }

    #[test]
    fn small_tensor_products() {
        let a1 = RootDatum::parse("A1").unwrap();
        let d = tensor_decompose(&a1, &w(&[1]), &w(&[1]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(d.summands, [(w(&[2]), 1), (w(&[0]), 1)].into_iter().collect());
        let a2 = RootDatum::parse("A2").unwrap();
        let d = tensor_decompose(&a2, &w(&[1, 0]), &w(&[0, 1]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(d.summands, [(w(&[1, 1]), 1), (w(&[0, 0]), 1)].into_iter().collect());
        let d = tensor_decompose(&a2, &w(&[2, 1]), &w(&[0, 0]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(d.summands, [(w(&[2, 1]), 1)].into_iter().collect());
    }

    #[test]
    fn both_routes_agree_beyond_threshold() {
        let a2 = RootDatum::parse("A2").unwrap();
        let (l, m) = (w(&[2, 2]), w(&[3, 1]));
        let bk = tensor_decompose_brauer_klimyk(&a2, &l, &m, DEFAULT_DIM_CAP).unwrap();
        let pe = tensor_decompose_peeling(&a2, &l, &m, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(bk, pe);
        assert_eq!(tensor_decompose(&a2, &l, &m, DEFAULT_DIM_CAP).unwrap(), bk);
    }

    #[test]
    fn decomposition_serialises_as_weight_keyed_map() {
        let a1 = RootDatum::parse("A1").unwrap();
        let d = tensor_decompose(&a1, &w(&[1]), &w(&[1]), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"(2)":1,"(0)":1}"#);
    }
}
