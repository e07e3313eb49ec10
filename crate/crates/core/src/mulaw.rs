//! Multiplication laws on multiplicity-free algebras: coefficient tables
//! `m_{λ,μ}^ν` graded by `λ+μ−ν`, the horospherical law, torus contraction,
//! root monoids, and for `SL(2)` the full commutativity/associativity system
//! together with its linearization at the horospherical point.
//!
//! For `SL(2)` a weight `aω` is written `a`. The coefficient `m[a,b,i]`
//! scales the channel `(f,g)_i` in `f·g = Σ_i m[a,b,i] (f,g)_i`, landing in
//! `R_(a+b−2i)`; it has grade `iα`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binary::{transvectant, BinaryForm};
use crate::error::{bail, Result};
use crate::linalg;
use crate::monoids::{minimal_generators, MonoidJson, RootMonoid, WeightMonoid};
use crate::poly::{Monomial, Poly, Var};
use crate::rational::{fmt_q, parse_q, Q};
use crate::rootdata::{RootDatum, RootVector, Weight};

/// Largest truncation accepted by [`orbit_law`].
pub const ORBIT_LAW_MAX_TRUNCATION: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    pub lam: Weight,
    pub mu: Weight,
    pub nu: Weight,
    pub channel: u32,
}

impl CoeffKey {
    pub fn a1(a: i64, b: i64, i: i64) -> Self {
        CoeffKey {
            lam: Weight(vec![a]),
            mu: Weight(vec![b]),
            nu: Weight(vec![a + b - 2 * i]),
            channel: i as u32,
        }
    }

    pub fn is_cartan(&self) -> bool {
        self.nu == &self.lam + &self.mu
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationLaw {
    rd: RootDatum,
    monoid: WeightMonoid,
    truncation: i64,
    coeffs: BTreeMap<CoeffKey, Poly>,
}

impl MultiplicationLaw {
    /// Builds and validates a law; zero coefficients are dropped.
    pub fn new(monoid: WeightMonoid, truncation: i64, coeffs: BTreeMap<CoeffKey, Poly>) -> Result<Self> {
        let law = MultiplicationLaw {
            rd: monoid.rd().clone(),
            monoid,
            truncation,
            coeffs: coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        };
        law.validate()?;
        Ok(law)
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }

    pub fn monoid(&self) -> &WeightMonoid {
        &self.monoid
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn coeffs(&self) -> &BTreeMap<CoeffKey, Poly> {
        &self.coeffs
    }

    pub fn get(&self, key: &CoeffKey) -> Poly {
        self.coeffs.get(key).cloned().unwrap_or_default()
    }

    /// Numeric value of `m[a,b,i]` for an `SL(2)` law.
    pub fn a1_value(&self, a: i64, b: i64, i: i64) -> Option<Q> {
        self.get(&CoeffKey::a1(a, b, i)).as_constant()
    }

    pub fn is_numeric(&self) -> bool {
        self.coeffs.values().all(|p| p.as_constant().is_some())
    }

    /// `λ+μ−ν` in simple-root coordinates.
    pub fn grade(&self, key: &CoeffKey) -> Result<RootVector> {
        self.rd.to_root_coords(&(&(&key.lam + &key.mu) - &key.nu))
    }

    pub fn validate(&self) -> Result<()> {
        let elems: BTreeSet<Weight> = self.monoid.elements_up_to(self.truncation).into_iter().collect();
        for (key, value) in &self.coeffs {
            for w in [&key.lam, &key.mu, &key.nu] {
                self.rd.check_rank(w)?;
                if !elems.contains(w) {
                    bail!(Validation, "coefficient {} uses {} outside the monoid window", render_key(key), w);
                }
            }
            if key.lam.level() + key.mu.level() > self.truncation {
                bail!(Validation, "coefficient {} lies beyond truncation {}", render_key(key), self.truncation);
            }
            let grade = self.grade(key)?;
            if !grade.in_root_cone_lattice() {
                bail!(Validation, "coefficient {} has grade {} outside ℕΠ", render_key(key), grade);
            }
            if self.rd.rank() == 1 && grade.to_ints() != Some(vec![key.channel as i64]) {
                bail!(Validation, "coefficient {} has channel inconsistent with its grade", render_key(key));
            }
            if key.is_cartan() && value.as_constant() != Some(Q::one()) {
                bail!(Validation, "Cartan coefficient {} must be 1, found {}", render_key(key), value);
            }
            let unit_violation = (key.lam.is_zero() && key.nu != key.mu) || (key.mu.is_zero() && key.nu != key.lam);
            if unit_violation {
                bail!(Validation, "unit law violated by {}", render_key(key));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> LawJson {
        LawJson {
            root_datum: self.rd.label().to_string(),
            monoid: self.monoid.to_json(),
            truncation: self.truncation,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| CoeffJson {
                    lam: k.lam.clone(),
                    mu: k.mu.clone(),
                    nu: k.nu.clone(),
                    channel: k.channel,
                    value: match v.as_constant() {
                        Some(c) => fmt_q(&c),
                        None => v.to_string(),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(j: &LawJson) -> Result<Self> {
        let rd = RootDatum::parse(&j.root_datum)?;
        if j.monoid.basis != crate::monoids::MonoidBasis::Fundamental {
            bail!(Validation, "a law's monoid must be given in fundamental coordinates");
        }
        let monoid = WeightMonoid::new(&rd, j.monoid.generators.iter().cloned().map(Weight).collect())?;
        let mut coeffs = BTreeMap::new();
        for c in &j.coeffs {
            let value = match parse_q(&c.value) {
                Ok(x) => Poly::constant(x),
                Err(_) => Poly::parse(&c.value)?,
            };
            let key = CoeffKey {
                lam: c.lam.clone(),
                mu: c.mu.clone(),
                nu: c.nu.clone(),
                channel: c.channel,
            };
            if coeffs.insert(key, value).is_some() {
                bail!(Validation, "duplicate coefficient ({},{},{},{})", c.lam, c.mu, c.nu, c.channel);
            }
        }
        Self::new(monoid, j.truncation, coeffs)
    }
}

fn render_key(k: &CoeffKey) -> String {
    format!("m[{},{},{};{}]", k.lam, k.mu, k.nu, k.channel)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub lam: Weight,
    pub mu: Weight,
    pub nu: Weight,
    pub channel: u32,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawJson {
    pub root_datum: String,
    pub monoid: MonoidJson,
    pub truncation: i64,
    pub coeffs: Vec<CoeffJson>,
}

fn window_pairs(monoid: &WeightMonoid, truncation: i64) -> Vec<(Weight, Weight)> {
    let elems = monoid.elements_up_to(truncation);
    let mut out = Vec::new();
    for l in &elems {
        for m in &elems {
            if l.level() + m.level() <= truncation {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    out
}

/// The law whose only nonzero coefficients are the Cartan ones.
pub fn horospherical_law(monoid: &WeightMonoid, truncation: i64) -> Result<MultiplicationLaw> {
    let coeffs = window_pairs(monoid, truncation)
        .into_iter()
        .map(|(l, m)| {
            let nu = &l + &m;
            (
                CoeffKey {
                    lam: l,
                    mu: m,
                    nu,
                    channel: 0,
                },
                Poly::one(),
            )
        })
        .collect();
    MultiplicationLaw::new(monoid.clone(), truncation, coeffs)
}

/// Scales every coefficient of grade `γ` by `∏_j s_j^{γ_j}`.
pub fn contract(law: &MultiplicationLaw, s: &[Q]) -> Result<MultiplicationLaw> {
    if !law.is_numeric() {
        bail!(Precondition, "contraction needs a numeric law");
    }
    if s.len() != law.rd.rank() {
        bail!(Validation, "torus point has {} coordinates, expected {}", s.len(), law.rd.rank());
    }
    let mut coeffs = BTreeMap::new();
    for (k, v) in &law.coeffs {
        let g = law.grade(k)?.to_ints().expect("validated grade");
        let factor = g
            .iter()
            .zip(s)
            .fold(Q::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize));
        coeffs.insert(k.clone(), v.scale(&factor));
    }
    MultiplicationLaw::new(law.monoid.clone(), law.truncation, coeffs)
}

/// Contraction by a formal point: coefficients become polynomials in `s1, s2, …`.
pub fn contract_formal(law: &MultiplicationLaw) -> Result<MultiplicationLaw> {
    let mut coeffs = BTreeMap::new();
    for (k, v) in &law.coeffs {
        let g = law.grade(k)?.to_ints().expect("validated grade");
        let mut mono = Poly::one();
        for (j, &e) in g.iter().enumerate() {
            mono = &mono * &Poly::var(Var::S(j)).pow(e as u32);
        }
        coeffs.insert(k.clone(), v * &mono);
    }
    Ok(MultiplicationLaw {
        rd: law.rd.clone(),
        monoid: law.monoid.clone(),
        truncation: law.truncation,
        coeffs,
    })
}

/// Specializes the `s` variables of a formally contracted law.
pub fn specialize(law: &MultiplicationLaw, s: &[Q]) -> Result<MultiplicationLaw> {
    let coeffs = law
        .coeffs
        .iter()
        .map(|(k, v)| {
            let p = v.substitute(&|var| match var {
                Var::S(j) => s.get(j).map(|x| Poly::constant(x.clone())),
                _ => None,
            });
            (k.clone(), p)
        })
        .collect();
    MultiplicationLaw::new(law.monoid.clone(), law.truncation, coeffs)
}

/// The monoid generated by the grades of the nonzero non-Cartan coefficients
/// in the window. Always flagged as bound-limited.
pub fn root_monoid_of_law(law: &MultiplicationLaw) -> Result<RootMonoid> {
    if !law.is_numeric() {
        bail!(Precondition, "root monoid needs a numeric law");
    }
    let mut grades = Vec::new();
    for k in law.coeffs.keys().filter(|k| !k.is_cartan()) {
        let g = law.grade(k)?;
        match g.to_ints() {
            Some(v) if g.in_root_cone_lattice() => grades.push(v),
            _ => bail!(Inconsistent, "grade {} of {} is not in ℕΠ", g, render_key(k)),
        }
    }
    let mut m = RootMonoid::new(&law.rd, minimal_generators(&grades))?;
    m.bound_limited = true;
    Ok(m)
}

fn require_a1(monoid: &WeightMonoid) -> Result<()> {
    if monoid.rd().rank() != 1 || !monoid.rd().is_type_a() {
        bail!(Precondition, "this operation is implemented for type A1 only");
    }
    Ok(())
}

/// The law of the orbit closure of `v ∈ V(n)`.
///
/// `R_(a)` is realized as `f ↦ (f, v^{a/n})_a / (a!)²` on `V(a)`, a
/// normalization under which highest weight vectors multiply to highest
/// weight vectors. Products are matched against the transvectant channels at
/// the point `v`, which determines them on the whole orbit closure.
pub fn orbit_law(v: &BinaryForm, monoid: &WeightMonoid, truncation: i64) -> Result<MultiplicationLaw> {
    require_a1(monoid)?;
    if truncation > ORBIT_LAW_MAX_TRUNCATION {
        bail!(Resource, "orbit law truncation {} exceeds {}", truncation, ORBIT_LAW_MAX_TRUNCATION);
    }
    if v.is_zero() || v.degree() == 0 {
        bail!(Validation, "orbit law needs a nonzero form of positive degree");
    }
    let n = v.degree() as i64;
    let elems: BTreeSet<i64> = monoid.elements_up_to(truncation).iter().map(|w| w.0[0]).collect();
    // pairing[a][p] is the value at v of the function attached to x^{a−p}y^p.
    let mut pairing: BTreeMap<i64, Vec<Q>> = BTreeMap::new();
    for &a in &elems {
        if a % n != 0 {
            bail!(Window, "no covariant of order {} among the powers of {}", a, v);
        }
        let cov = v.pow((a / n) as u32);
        let norm = num_traits::pow(Q::from_integer((1..=a).product::<i64>().into()), 2);
        let row = (0..=a as usize)
            .map(|p| {
                let t = transvectant(&BinaryForm::monomial(a as usize, p), &cov, a as usize)?;
                Ok(&t.coeffs()[0] / &norm)
            })
            .collect::<Result<Vec<Q>>>()?;
        pairing.insert(a, row);
    }
    let eval = |h: &BinaryForm| -> Q {
        pairing[&(h.degree() as i64)]
            .iter()
            .zip(h.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| l * c)
            .sum()
    };
    let mut coeffs = BTreeMap::new();
    for &a in &elems {
        for &b in &elems {
            if a + b > truncation {
                continue;
            }
            coeffs.insert(CoeffKey::a1(a, b, 0), Poly::one());
            if a == 0 || b == 0 {
                continue;
            }
            let channels: Vec<i64> = (1..=a.min(b)).filter(|i| elems.contains(&(a + b - 2 * i))).collect();
            // One row per pair of basis monomials: channel values, then the
            // residual of the product after removing the Cartan part.
            let mut rows = Vec::new();
            for p in 0..=a as usize {
                let f = BinaryForm::monomial(a as usize, p);
                for r in 0..=b as usize {
                    let g = BinaryForm::monomial(b as usize, r);
                    let mut row = Vec::with_capacity(channels.len() + 1);
                    for &i in &channels {
                        row.push(eval(&transvectant(&f, &g, i as usize)?));
                    }
                    row.push(&pairing[&a][p] * &pairing[&b][r] - eval(&f.mul(&g)));
                    rows.push(row);
                }
            }
            let k = channels.len();
            let (red, pivots) = linalg::rref(&rows, k + 1);
            if pivots.last() == Some(&k) {
                bail!(
                    NotMultiplicityFree,
                    "the product R_({})·R_({}) has components outside the channels into 𝒮",
                    a,
                    b
                );
            }
            if pivots.len() < k {
                bail!(Window, "channels of R_({})·R_({}) are not determined at {}", a, b, v);
            }
            for (row, &pc) in red.iter().zip(&pivots) {
                coeffs.insert(CoeffKey::a1(a, b, channels[pc]), Poly::constant(row[k].clone()));
            }
        }
    }
    MultiplicationLaw::new(monoid.clone(), truncation, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    Commutativity,
    Associativity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub kind: EquationKind,
    /// Torus degree `kα`, stored as `k`.
    pub tag: i64,
    #[serde(serialize_with = "ser_display")]
    pub poly: Poly,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The commutativity and associativity equations of an `SL(2)` law window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub monoid: WeightMonoid,
    pub truncation: i64,
    pub unknowns: Vec<Var>,
    pub equations: Vec<Equation>,
}

/// Grade `k` (meaning `kα`) of an `m[a,b,i]` unknown.
pub fn var_grade(v: &Var) -> i64 {
    match v {
        Var::M { i, .. } => *i,
        Var::S(_) => 0,
    }
}

fn monomial_grade(m: &Monomial) -> i64 {
    m.factors().iter().map(|(v, e)| var_grade(v) * *e as i64).sum()
}

impl PolySystem {
    /// Plain-text export: a header line per unknown, then one polynomial per line.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for u in &self.unknowns {
            out.push_str(&format!("# unknown {} grade={}*alpha\n", u, var_grade(u)));
        }
        for e in &self.equations {
            out.push_str(&e.poly.to_string());
            out.push('\n');
        }
        out
    }

    /// Reads back the output of [`PolySystem::export`] as (unknowns, polynomials).
    pub fn parse_export(text: &str) -> Result<(Vec<Var>, Vec<Poly>)> {
        let mut unknowns = Vec::new();
        let mut polys = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("# unknown ") {
                let name = rest.split_whitespace().next().unwrap_or_default();
                unknowns.push(name.parse()?);
            } else if !line.starts_with('#') {
                polys.push(Poly::parse(line)?);
            }
        }
        Ok((unknowns, polys))
    }

    /// True iff every monomial of every equation has the equation's grade.
    pub fn is_homogeneous(&self) -> bool {
        self.equations
            .iter()
            .all(|e| e.poly.terms().all(|(m, _)| monomial_grade(m) == e.tag))
    }

    /// Residuals of the equations at the coefficients of `law`.
    pub fn evaluate(&self, law: &MultiplicationLaw) -> Result<Vec<Q>> {
        if !law.is_numeric() {
            bail!(Precondition, "evaluation needs a numeric law");
        }
        Ok(self
            .equations
            .iter()
            .map(|e| {
                let p = e.poly.substitute(&|v| match v {
                    Var::M { a, b, i } => Some(Poly::constant(law.a1_value(a, b, i).unwrap_or_else(Q::zero))),
                    Var::S(_) => None,
                });
                p.constant_term()
            })
            .collect())
    }

    pub fn is_satisfied_by(&self, law: &MultiplicationLaw) -> Result<bool> {
        Ok(self.evaluate(law)?.iter().all(Zero::is_zero))
    }
}

/// Generates the law equations for `𝒮 ⊆ ℕ` (type A1) within truncation `D`.
/// Unknowns are `m[a,b,i]` with `a, b ∈ 𝒮∖0`, `a+b ≤ D`, `i ≥ 1` and
/// `a+b−2i ∈ 𝒮`. Associativity is imposed on every triple of nonzero
/// elements with `a+b+c ≤ D`, using `x^a` as first factor.
pub fn law_equations(monoid: &WeightMonoid, truncation: i64) -> Result<PolySystem> {
    require_a1(monoid)?;
    let elems: BTreeSet<i64> = monoid.elements_up_to(truncation).iter().map(|w| w.0[0]).collect();
    let nonzero: Vec<i64> = elems.iter().copied().filter(|&a| a > 0).collect();
    let mut unknowns = BTreeSet::new();
    for &a in &nonzero {
        for &b in &nonzero {
            if a + b > truncation {
                continue;
            }
            for i in 1..=a.min(b) {
                if elems.contains(&(a + b - 2 * i)) {
                    unknowns.insert(Var::m(a, b, i));
                }
            }
        }
    }
    if !nonzero.iter().any(|&a| nonzero.iter().any(|&b| a + b <= truncation)) {
        bail!(Precondition, "truncation {} contains no products of generators", truncation);
    }
    let coef = |x: i64, y: i64, i: i64| -> Option<Poly> {
        if i == 0 {
            Some(Poly::one())
        } else if x == 0 || y == 0 {
            None
        } else {
            let v = Var::m(x, y, i);
            unknowns.contains(&v).then(|| Poly::var(v))
        }
    };

    let mut seen: BTreeSet<(EquationKind, i64, String)> = BTreeSet::new();
    let mut push = |kind: EquationKind, tag: i64, p: Poly| {
        if p.is_zero() {
            return;
        }
        let c = p.canonical();
        seen.insert((kind, tag, c.to_string()));
    };

    for v in &unknowns {
        if let Var::M { a, b, i } = *v {
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            let other = coef(b, a, i).unwrap_or_default();
            push(EquationKind::Commutativity, i, &Poly::var(*v) - &other.scale(&sign));
        }
    }

    for &a in &nonzero {
        for &b in &nonzero {
            for &c in &nonzero {
                if a + b + c > truncation {
                    continue;
                }
                let f = BinaryForm::monomial(a as usize, 0);
                for qg in 0..=b as usize {
                    let g = BinaryForm::monomial(b as usize, qg);
                    for rh in 0..=c as usize {
                        let h = BinaryForm::monomial(c as usize, rh);
                        let mut acc: BTreeMap<(i64, usize), Poly> = BTreeMap::new();
                        let mut add = |s: i64, coeff: &Poly, form: &BinaryForm, sign: &Q| {
                            for (k, x) in form.coeffs().iter().enumerate() {
                                if !x.is_zero() {
                                    let e = acc.entry((s, k)).or_default();
                                    *e = &*e + &coeff.scale(&(x * sign));
                                }
                            }
                        };
                        let plus = Q::one();
                        let minus = -Q::one();
                        // (f·g)·h
                        for i in 0..=a.min(b) {
                            let Some(c1) = coef(a, b, i) else { continue };
                            let fg = transvectant(&f, &g, i as usize)?;
                            let e = a + b - 2 * i;
                            for j in 0..=e.min(c) {
                                let Some(c2) = coef(e, c, j) else { continue };
                                let form = transvectant(&fg, &h, j as usize)?;
                                add(i + j, &(&c1 * &c2), &form, &plus);
                            }
                        }
                        // f·(g·h)
                        for i in 0..=b.min(c) {
                            let Some(c1) = coef(b, c, i) else { continue };
                            let gh = transvectant(&g, &h, i as usize)?;
                            let e = b + c - 2 * i;
                            for j in 0..=a.min(e) {
                                let Some(c2) = coef(a, e, j) else { continue };
                                let form = transvectant(&f, &gh, j as usize)?;
                                add(i + j, &(&c1 * &c2), &form, &minus);
                            }
                        }
                        for ((s, _), p) in acc {
                            push(EquationKind::Associativity, s, p);
                        }
                    }
                }
            }
        }
    }

    let equations = seen
        .into_iter()
        .map(|(kind, tag, text)| Equation {
            kind,
            tag,
            poly: Poly::parse(&text).expect("canonical form parses"),
        })
        .collect();
    Ok(PolySystem {
        monoid: monoid.clone(),
        truncation,
        unknowns: unknowns.into_iter().collect(),
        equations,
    })
}

/// Tangent space of the law scheme at the horospherical point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoroTangent {
    pub dim: usize,
    /// One entry per basis vector, `kα` in root coordinates.
    pub weights: Vec<RootVector>,
    /// Dimension of each graded piece `k ↦ dim`.
    pub by_grade: BTreeMap<i64, usize>,
    pub unknowns: usize,
    pub equations: usize,
}

/// Solves the degree-one truncation of `system` at "all unknowns = 0",
/// grade by grade.
pub fn tangent_at_horospherical(system: &PolySystem) -> Result<HoroTangent> {
    if let Some(e) = system.equations.iter().find(|e| !e.poly.constant_term().is_zero()) {
        bail!(Inconsistent, "horospherical point violates equation {}", e.poly);
    }
    let mut by_grade = BTreeMap::new();
    let mut weights = Vec::new();
    let grades: BTreeSet<i64> = system.unknowns.iter().map(var_grade).collect();
    for k in grades {
        let vars: Vec<Var> = system.unknowns.iter().copied().filter(|v| var_grade(v) == k).collect();
        let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let rows: Vec<Vec<Q>> = system
            .equations
            .iter()
            .filter(|e| e.tag == k)
            .map(|e| {
                let mut row = vec![Q::zero(); vars.len()];
                for (v, c) in e.poly.linear_part() {
                    row[index[&v]] = c;
                }
                row
            })
            .collect();
        let dim = vars.len() - linalg::rank(&rows, vars.len());
        if dim > 0 {
            by_grade.insert(k, dim);
            for _ in 0..dim {
                weights.push(RootVector::from_ints(&[k]));
            }
        }
    }
    Ok(HoroTangent {
        dim: weights.len(),
        weights,
        by_grade,
        unknowns: system.unknowns.len(),
        equations: system.equations.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn nn(n: i64) -> WeightMonoid {
        WeightMonoid::a1_multiples(n).unwrap()
    }

    fn tangent_dim(n: i64, d: i64) -> usize {
        tangent_at_horospherical(&law_equations(&nn(n), d).unwrap()).unwrap().dim
    }

    #[test]
    fn moduli_tangent_small_cases() {
        assert_eq!(tangent_dim(1, 6), 0);
        assert_eq!(tangent_dim(2, 8), 1);
        assert_eq!(tangent_dim(3, 12), 0);
    }

    #[test]
    fn tangent_weight_for_quadrics() {
        let t = tangent_at_horospherical(&law_equations(&nn(2), 8).unwrap()).unwrap();
        assert_eq!(t.weights, vec![RootVector::from_ints(&[2])]);
    }

    #[test]
    fn horospherical_law_solves_system() {
        let m = nn(2);
        let law = horospherical_law(&m, 8).unwrap();
        assert!(law.coeffs().keys().all(CoeffKey::is_cartan));
        assert!(law_equations(&m, 8).unwrap().is_satisfied_by(&law).unwrap());
        assert!(root_monoid_of_law(&law).unwrap().generators().is_empty());
    }

    #[test]
    fn equations_shape() {
        let sys = law_equations(&nn(2), 8).unwrap();
        assert!(sys.is_homogeneous());
        for e in &sys.equations {
            match e.kind {
                EquationKind::Commutativity => assert!(e.poly.degree() <= 1),
                EquationKind::Associativity => assert!(e.poly.degree() <= 2),
            }
        }
        assert!(sys.equations.iter().any(|e| e.poly.degree() == 2));
    }

    #[test]
    fn export_round_trip() {
        let sys = law_equations(&nn(2), 6).unwrap();
        let text = sys.export();
        assert!(text.starts_with("# unknown m[2,2,1] grade=1*alpha\n"));
        let (unknowns, polys) = PolySystem::parse_export(&text).unwrap();
        assert_eq!(unknowns, sys.unknowns);
        let orig: Vec<Poly> = sys.equations.iter().map(|e| e.poly.clone()).collect();
        assert_eq!(polys, orig);
    }

    #[test]
    fn window_too_small() {
        assert!(law_equations(&nn(3), 5).is_err());
    }

    #[test]
    fn quadric_orbit_law() {
        let v = BinaryForm::parse("x^2+y^2").unwrap();
        let m = nn(2);
        let law = orbit_law(&v, &m, 8).unwrap();
        assert_eq!(law.a1_value(2, 2, 2), Some(q_frac(1, 6)));
        assert_eq!(law.a1_value(2, 2, 1), Some(q(0)));
        let rm = root_monoid_of_law(&law).unwrap();
        assert_eq!(rm.generators(), &[vec![2]]);
        assert!(rm.saturation().unwrap().is_free().unwrap());
        assert!(law_equations(&m, 8).unwrap().is_satisfied_by(&law).unwrap());
    }

    #[test]
    fn highest_weight_orbit_is_horospherical() {
        let m = nn(2);
        let law = orbit_law(&BinaryForm::parse("x^2").unwrap(), &m, 8).unwrap();
        assert_eq!(law, horospherical_law(&m, 8).unwrap());
    }

    #[test]
    fn quartic_orbit_laws() {
        let m = nn(4);
        let err = orbit_law(&BinaryForm::parse("x^4+x^2*y^2").unwrap(), &m, 8).unwrap_err();
        assert!(matches!(err, crate::Error::NotMultiplicityFree(_)));
        let v = BinaryForm::parse("x^4+2*x^2*y^2+y^4").unwrap();
        let law = orbit_law(&v, &m, 8).unwrap();
        assert_eq!(law.a1_value(4, 4, 2), Some(q_frac(1, 126)));
        assert_eq!(root_monoid_of_law(&law).unwrap().generators(), &[vec![2]]);
        assert!(law_equations(&m, 8).unwrap().is_satisfied_by(&law).unwrap());
    }

    #[test]
    fn orbit_law_window_errors() {
        let v = BinaryForm::parse("x^2+y^2").unwrap();
        let err = orbit_law(&v, &WeightMonoid::a1_multiples(1).unwrap(), 4).unwrap_err();
        assert!(matches!(err, crate::Error::Window(_)));
        assert!(matches!(orbit_law(&v, &nn(2), 20), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn contraction() {
        let m = nn(2);
        let law = orbit_law(&BinaryForm::parse("x^2+y^2").unwrap(), &m, 8).unwrap();
        assert_eq!(contract(&law, &[q(1)]).unwrap(), law);
        assert_eq!(contract(&law, &[q(0)]).unwrap(), horospherical_law(&m, 8).unwrap());
        let formal = contract_formal(&law).unwrap();
        assert_eq!(formal.get(&CoeffKey::a1(2, 2, 2)).to_string(), "+1/6*s1*s1");
        assert_eq!(specialize(&formal, &[q(3)]).unwrap(), contract(&law, &[q(3)]).unwrap());
        let ab = contract(&contract(&law, &[q(2)]).unwrap(), &[q(5)]).unwrap();
        assert_eq!(ab, contract(&law, &[q(10)]).unwrap());
        assert!(contract(&formal, &[q(1)]).is_err());
    }

    #[test]
    fn validation_rejects_bad_laws() {
        let m = nn(2);
        let mut c = BTreeMap::new();
        c.insert(CoeffKey::a1(2, 2, 0), Poly::constant(q(2)));
        assert!(MultiplicationLaw::new(m.clone(), 8, c).is_err());
        let mut c = BTreeMap::new();
        let mut key = CoeffKey::a1(2, 2, 1);
        key.channel = 2;
        c.insert(key, Poly::constant(q(1)));
        assert!(MultiplicationLaw::new(m.clone(), 8, c).is_err());
        let mut c = BTreeMap::new();
        c.insert(CoeffKey::a1(6, 4, 1), Poly::constant(q(1)));
        assert!(MultiplicationLaw::new(m, 8, c).is_err());
    }

    #[test]
    fn json_round_trip() {
        let law = orbit_law(&BinaryForm::parse("x^2+y^2").unwrap(), &nn(2), 6).unwrap();
        let text = serde_json::to_string(&law.to_json()).unwrap();
        let back: LawJson = serde_json::from_str(&text).unwrap();
        assert_eq!(MultiplicationLaw::from_json(&back).unwrap(), law);
        let formal = contract_formal(&law).unwrap();
        let back: LawJson = serde_json::from_str(&serde_json::to_string(&formal.to_json()).unwrap()).unwrap();
        assert_eq!(MultiplicationLaw::from_json(&back).unwrap(), formal);
    }

    #[test]
    fn general_type_grading() {
        let a2 = RootDatum::from_label("A2").unwrap();
        let m = WeightMonoid::new(&a2, vec![Weight(vec![1, 1])]).unwrap();
        let horo = horospherical_law(&m, 4).unwrap();
        let mut c = horo.coeffs().clone();
        // ω1+ω2 is the adjoint weight: (1,1)+(1,1)−(1,1) = α1+α2.
        c.insert(
            CoeffKey {
                lam: Weight(vec![1, 1]),
                mu: Weight(vec![1, 1]),
                nu: Weight(vec![1, 1]),
                channel: 1,
            },
            Poly::constant(q(3)),
        );
        let law = MultiplicationLaw::new(m, 4, c).unwrap();
        assert_eq!(root_monoid_of_law(&law).unwrap().generators(), &[vec![1, 1]]);
        assert_eq!(contract(&law, &[q(0), q(1)]).unwrap(), horo);
    }
}
