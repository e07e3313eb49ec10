//! Invariant first-order deformations of orbit closures, through the exact
//! sequence
//! `0 → (𝔤/𝔤_x)^{G_x} → V^{G_x} → (V/𝔤·x)^{G_x} → T¹(X)^G → 0`,
//! and the bookkeeping identity relating them to the moduli tangent space.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::liealg::{ExplicitModule, SlElem, StabilizerSpec, DEFAULT_MODULE_CAP};
use crate::linalg::Subspace;
use crate::rational::{q, Q};
use crate::rootdata::{RootDatum, RootVector, Weight};

/// Hypotheses of the exact sequence that the caller vouches for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Hypotheses {
    /// `X` is normal.
    pub normal: bool,
    /// `X ∖ G·x` has codimension at least 2 in `X`.
    pub boundary_codim2: bool,
}

impl Hypotheses {
    pub fn asserted() -> Self {
        Hypotheses {
            normal: true,
            boundary_codim2: true,
        }
    }
}

/// How the weights of `T¹` were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attribution {
    /// Each weight space of `T¹` computed separately.
    Graded,
    /// Weights read off the components of cokernel representatives.
    PerComponent,
    /// Some summand of `V` is not irreducible; no weights reported.
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub dim_g_mod_gx_fixed: usize,
    #[serde(rename = "dim_V_fixed")]
    pub dim_v_fixed: usize,
    pub dim_normal_fixed: usize,
    #[serde(rename = "dim_T1_invariant")]
    pub dim_t1_invariant: usize,
    pub weights: Vec<RootVector>,
    pub attribution: Attribution,
    pub hypotheses: Hypotheses,
    pub dim_orbit: usize,
    pub dim_isotropy: usize,
}

fn weight_grades(m: &ExplicitModule) -> Option<Vec<Vec<i64>>> {
    let rd = m.rd();
    let mut out = vec![Vec::new(); m.dim()];
    for (b, range) in m.blocks().iter().enumerate() {
        let lam = m.block_highest_weight(b)?;
        for j in range.clone() {
            let diff = &lam - &m.basis_weights()[j];
            out[j] = rd.to_root_coords(&diff).ok()?.to_ints()?;
        }
    }
    Some(out)
}

fn support(v: &[Q]) -> Vec<usize> {
    (0..v.len()).filter(|&j| !v[j].is_zero()).collect()
}

/// Grade of a homogeneous Lie algebra element: `−β` for a root vector of
/// root `β`, zero on the Cartan.
fn lie_grade(m: &ExplicitModule, xi: &[Q]) -> Option<Vec<i64>> {
    let sl = m.sl();
    let mut grades = support(xi).into_iter().map(|k| {
        let r = sl.root(sl.elems()[k]);
        r.iter().map(|c| -c).collect::<Vec<i64>>()
    });
    let first = grades.next()?;
    grades.all(|g| g == first).then_some(first)
}

/// Computes `T¹(X)^G` for `X` the closure of `G·x` in `M`, where `stab`
/// describes the isotropy group `G_x`.
pub fn t1_invariant(m: &ExplicitModule, x: &[Q], stab: &StabilizerSpec, hyp: Hypotheses) -> Result<TangentReport> {
    stab.check_for(m)?;
    if x.len() != m.dim() {
        bail!(Validation, "vector has length {}, module has dimension {}", x.len(), m.dim());
    }
    for xi in &stab.lie_part {
        if m.act(xi, x).iter().any(|c| !c.is_zero()) {
            bail!(Precondition, "stabilizer element does not annihilate x");
        }
    }
    if let Some(j) = support(x).into_iter().find(|&j| !stab.passes(&m.basis_weights()[j])) {
        bail!(Precondition, "x has a component of weight {} moved by the diagonal part", m.basis_weights()[j]);
    }

    let rd = m.rd();
    let adj = ExplicitModule::parse(rd, &format!("adjoint({})", m.sl().n()))?;
    let dim = m.dim();
    let gdim = m.sl().dim();
    let s = m.orbit_tangent(x)?;
    let gx = Subspace::span(gdim, &m.stabilizer_lie(x)?);

    // Ungraded computation.
    let v_fixed = m.fixed_subspace(stab)?;
    let normal_reps = m.fixed_quotient(&s, stab)?;
    let g_reps = adj.fixed_quotient(&gx, stab)?;
    let (nf, vf, gf) = (normal_reps.len(), v_fixed.dim(), g_reps.len());
    if nf + gf < vf {
        bail!(Inconsistent, "alternating sum is negative: {} − {} + {}", nf, vf, gf);
    }
    let t1 = nf + gf - vf;

    // Exactness at both ends: the kernel of V^{G_x} → V/𝔤x is (𝔤x)^{G_x} ≅ (𝔤/𝔤_x)^{G_x},
    // and the cokernel is T¹.
    let kernel = s.intersect(&v_fixed).dim();
    let image = v_fixed.sum(&s).dim() - s.dim();
    if kernel != gf || nf - image != t1 {
        bail!(
            Inconsistent,
            "exact sequence check failed: kernel {} vs {}, cokernel {} vs {}",
            kernel,
            gf,
            nf - image,
            t1
        );
    }

    let grades = weight_grades(m);
    let x_grades: Option<Vec<i64>> = grades.as_ref().and_then(|g| {
        let sup = support(x);
        let first = g[sup[0]].clone();
        sup.iter().all(|&j| g[j] == first).then_some(first)
    });
    let stab_homogeneous = stab.lie_part.iter().all(|xi| lie_grade(m, xi).is_some());

    let (weights, attribution) = match (&grades, x_grades) {
        (Some(grades), Some(tx)) if stab_homogeneous => {
            let shifted: Vec<Vec<i64>> = grades
                .iter()
                .map(|g| g.iter().zip(&tx).map(|(a, b)| a - b).collect())
                .collect();
            let adj_grades: Vec<Vec<i64>> = m
                .sl()
                .elems()
                .iter()
                .map(|&e| m.sl().root(e).iter().map(|c| -c).collect())
                .collect();
            let w = graded_t1(m, &adj, x, stab, &s, &gx, &shifted, &adj_grades, (nf, vf, gf))?;
            (w, Attribution::Graded)
        }
        (Some(grades), _) => {
            // Cokernel representatives, each contributing the weights of its components.
            let reps = v_fixed.sum(&s).complement_in(&Subspace::span(dim, &normal_reps).sum(&s));
            let mut w = Vec::new();
            for r in &reps {
                let mut seen: Vec<Vec<i64>> = support(r).into_iter().map(|j| grades[j].clone()).collect();
                seen.sort();
                seen.dedup();
                w.extend(seen.into_iter().map(|g| RootVector::from_ints(&g)));
            }
            (w, Attribution::PerComponent)
        }
        (None, _) => (Vec::new(), Attribution::Unavailable),
    };
    if let Some(bad) = weights.iter().find(|w| !w.in_root_cone_lattice()) {
        bail!(Inconsistent, "tangent weight {} lies outside ℕΠ", bad);
    }

    Ok(TangentReport {
        dim_g_mod_gx_fixed: gf,
        dim_v_fixed: vf,
        dim_normal_fixed: nf,
        dim_t1_invariant: t1,
        weights,
        attribution,
        hypotheses: hyp,
        dim_orbit: s.dim(),
        dim_isotropy: gx.dim(),
    })
}

/// Runs the exact sequence weight space by weight space for a homogeneous
/// `x` and returns the weights of `T¹`, one per dimension.
#[allow(clippy::too_many_arguments)]
fn graded_t1(
    m: &ExplicitModule,
    adj: &ExplicitModule,
    x: &[Q],
    stab: &StabilizerSpec,
    s: &Subspace,
    gx: &Subspace,
    v_grades: &[Vec<i64>],
    g_grades: &[Vec<i64>],
    totals: (usize, usize, usize),
) -> Result<Vec<RootVector>> {
    let dim = m.dim();
    let gdim = m.sl().dim();
    let mut all: Vec<Vec<i64>> = v_grades.iter().chain(g_grades).cloned().collect();
    all.sort();
    all.dedup();

    // Homogeneous spanning sets of 𝔤·x and 𝔤_x.
    let mut s_parts: BTreeMap<Vec<i64>, Vec<Vec<Q>>> = BTreeMap::new();
    for (k, &e) in m.sl().elems().iter().enumerate() {
        let img = m.act(&m.sl().unit(e), x);
        if img.iter().any(|c| !c.is_zero()) {
            s_parts.entry(g_grades[k].clone()).or_default().push(img);
        }
    }
    let mut gx_parts: BTreeMap<Vec<i64>, Vec<Vec<Q>>> = BTreeMap::new();
    for g in &all {
        let allowed: Vec<usize> = (0..gdim).filter(|&k| &g_grades[k] == g).collect();
        if allowed.is_empty() {
            continue;
        }
        let restricted: Vec<Vec<Q>> = crate::linalg::unit_vectors(gdim, allowed.iter().copied());
        let piece = gx.intersect(&Subspace::span(gdim, &restricted));
        gx_parts.insert(g.clone(), piece.basis().to_vec());
    }

    let (mut nf, mut vf, mut gf) = (0, 0, 0);
    let mut weights = Vec::new();
    for g in &all {
        let v_allowed: Vec<bool> = v_grades.iter().map(|h| h == g).collect();
        let a_allowed: Vec<bool> = g_grades.iter().map(|h| h == g).collect();
        let s_local = Subspace::span(dim, s_parts.get(g).map(Vec::as_slice).unwrap_or(&[]));
        let gx_local = Subspace::span(gdim, gx_parts.get(g).map(Vec::as_slice).unwrap_or(&[]));
        let n_g = m.fixed_quotient_in(stab, &v_allowed, &s_local, s).len();
        let v_g = m.fixed_subspace_in(stab, &v_allowed).dim();
        let g_g = adj.fixed_quotient_in(stab, &a_allowed, &gx_local, gx).len();
        if n_g + g_g < v_g {
            bail!(Inconsistent, "negative T¹ in grade {:?}", g);
        }
        let t = n_g + g_g - v_g;
        weights.extend(std::iter::repeat(RootVector::from_ints(g)).take(t));
        nf += n_g;
        vf += v_g;
        gf += g_g;
    }
    if (nf, vf, gf) != totals {
        bail!(
            Inconsistent,
            "graded dimensions {:?} disagree with ungraded {:?}",
            (nf, vf, gf),
            totals
        );
    }
    Ok(weights)
}

/// `λ − μ` in simple-root coordinates: the weight of the coordinate `t` in
/// the family `x_λ + t·v_μ`.
pub fn tangent_weight(rd: &RootDatum, lam: &Weight, mu: &Weight) -> Result<RootVector> {
    rd.check_rank(lam)?;
    rd.check_rank(mu)?;
    if !rd.dominance_leq(mu, lam)? {
        bail!(Validation, "{} is not below {} in the dominance order", mu, lam);
    }
    rd.to_root_coords(&(lam - mu))
}

/// `dim T_X M_Y = dim T¹(X)^G + dim Der^T(Y) − dim Der^G(X)`.
pub fn moduli_tangent_dim(t1_inv: usize, dim_der_t_y: usize, dim_der_g_x: usize) -> Result<usize> {
    let total = (t1_inv + dim_der_t_y) as i64 - dim_der_g_x as i64;
    if total < 0 {
        bail!(Inconsistent, "moduli tangent dimension would be {}", total);
    }
    Ok(total as usize)
}

/// `V(n)`, `x = x^n`, isotropy `U·μ_n`.
pub fn example1_instance(n: usize) -> Result<(ExplicitModule, Vec<Q>, StabilizerSpec)> {
    if n == 0 {
        bail!(Validation, "n must be positive");
    }
    let m = ExplicitModule::a1_irreducible(n)?;
    let mut x = vec![Q::zero(); m.dim()];
    x[0] = q(1);
    let stab = StabilizerSpec::unipotent(m.sl()).with_congruence(vec![1], n as u64);
    Ok((m, x, stab))
}

pub fn example1(n: usize) -> Result<TangentReport> {
    let (m, x, stab) = example1_instance(n)?;
    t1_invariant(&m, &x, &stab, Hypotheses::asserted())
}

/// `V = k⁴ ⊕ ∧²k⁴ ⊕ ∧³k⁴`, `x₀ = (e₁, e₁∧e₂, e₁∧e₂∧e₃)`, isotropy `U`.
pub fn example2_instance() -> Result<(ExplicitModule, Vec<Q>, StabilizerSpec)> {
    let rd = RootDatum::from_label("A3")?;
    let m = crate::liealg::build_module(
        &rd,
        &crate::liealg::ModuleExpr::parse("sum(natural(4),ext(2,natural(4)),ext(3,natural(4)))")?,
        DEFAULT_MODULE_CAP,
    )?;
    let mut x = vec![Q::zero(); m.dim()];
    for label in ["e1", "e1∧e2", "e1∧e2∧e3"] {
        let j = m
            .labels()
            .iter()
            .position(|l| l == label)
            .expect("basis label present");
        x[j] = q(1);
    }
    let stab = StabilizerSpec::unipotent(m.sl());
    Ok((m, x, stab))
}

pub fn example2() -> Result<TangentReport> {
    let (m, x, stab) = example2_instance()?;
    t1_invariant(&m, &x, &stab, Hypotheses::asserted())
}

/// Chevalley element for `E_{ij}` (0-based) as a coordinate vector.
pub fn root_vector(m: &ExplicitModule, i: usize, j: usize) -> Vec<Q> {
    m.sl().unit(SlElem::E(i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_dims_and_weights() {
        let dims: Vec<usize> = (1..=6).map(|n| example1(n).unwrap().dim_t1_invariant).collect();
        assert_eq!(dims, vec![0, 1, 0, 1, 0, 0]);
        for n in [2, 4] {
            let r = example1(n).unwrap();
            assert_eq!(r.attribution, Attribution::Graded);
            assert_eq!(r.weights, vec![RootVector::from_ints(&[2])]);
        }
    }

    #[test]
    fn example1_pieces() {
        let r = example1(4).unwrap();
        assert_eq!((r.dim_normal_fixed, r.dim_v_fixed, r.dim_g_mod_gx_fixed), (1, 1, 1));
        assert_eq!(r.dim_orbit, 2);
    }

    #[test]
    fn example2_dims_and_weights() {
        let r = example2().unwrap();
        assert_eq!(r.dim_t1_invariant, 2);
        assert_eq!((r.dim_normal_fixed, r.dim_v_fixed, r.dim_g_mod_gx_fixed), (2, 3, 3));
        let mut w: Vec<String> = r.weights.iter().map(ToString::to_string).collect();
        w.sort();
        assert_eq!(w, vec!["α1+α2", "α2+α3"]);
    }

    #[test]
    fn stabilizer_must_annihilate() {
        let (m, x, _) = example1_instance(2).unwrap();
        let bad = StabilizerSpec {
            lie_part: vec![root_vector(&m, 1, 0)],
            diag_part: Vec::new(),
        };
        assert!(matches!(
            t1_invariant(&m, &x, &bad, Hypotheses::default()),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn non_homogeneous_point_falls_back() {
        let m = ExplicitModule::a1_irreducible(2).unwrap();
        let x = vec![q(1), q(0), q(1)];
        let stab = StabilizerSpec::default();
        let r = t1_invariant(&m, &x, &stab, Hypotheses::default()).unwrap();
        assert_eq!(r.attribution, Attribution::PerComponent);
        assert_eq!(r.dim_orbit, 2);
        assert_eq!(
            r.dim_t1_invariant,
            r.dim_normal_fixed + r.dim_g_mod_gx_fixed - r.dim_v_fixed
        );
    }

    #[test]
    fn weights_of_families() {
        let a1 = RootDatum::from_label("A1").unwrap();
        assert_eq!(
            tangent_weight(&a1, &Weight(vec![4]), &Weight(vec![0])).unwrap(),
            RootVector::from_ints(&[2])
        );
        assert!(tangent_weight(&a1, &Weight(vec![0]), &Weight(vec![2])).is_err());
        let a3 = RootDatum::from_label("A3").unwrap();
        // e2∧e3 has weight ε2+ε3 = −ω1+ω3 in fundamental coordinates.
        let w = tangent_weight(&a3, &Weight(vec![0, 1, 0]), &Weight(vec![-1, 0, 1])).unwrap();
        assert_eq!(w.to_string(), "α1+α2");
        assert!(tangent_weight(&a3, &Weight(vec![0, 1, 0]), &Weight(vec![0, 1, 0])).unwrap().is_zero());
    }

    #[test]
    fn moduli_identity() {
        assert_eq!(moduli_tangent_dim(0, 3, 3).unwrap(), 0);
        assert_eq!(moduli_tangent_dim(1, 1, 1).unwrap(), 1);
        assert_eq!(moduli_tangent_dim(2, 4, 4).unwrap(), 2);
        assert!(moduli_tangent_dim(0, 1, 2).is_err());
    }
}
