//! Explicit `sl_n`-modules over the rationals.
//!
//! Every module stores the action matrix of each element of the Chevalley
//! basis of `sl_n` (see [`SlBasis`]). On `natural(n)` the basis acts by
//! `e_i = E_{i,i+1}`, `f_i = E_{i+1,i}`, `h_i = E_{ii} - E_{i+1,i+1}`; every
//! other module is derived functorially from that one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::linalg::{self, combine, Subspace};
use crate::rational::{q, to_i64, Q};
use crate::rootdata::{RootDatum, Weight};

pub const DEFAULT_MODULE_CAP: usize = 2000;

/// One element of the Chevalley basis of `sl_n`, indices 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlElem {
    /// Matrix unit `E_{ij}`, `i ≠ j`.
    E(usize, usize),
    /// `E_{kk} - E_{k+1,k+1}`.
    H(usize),
}

impl fmt::Display for SlElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlElem::E(i, j) => write!(f, "E{}{}", i + 1, j + 1),
            SlElem::H(k) => write!(f, "H{}", k + 1),
        }
    }
}

/// The Chevalley basis of `sl_n`, ordered: positive root vectors `E_{ij}`
/// (`i < j`, lexicographic), then `H_1..H_{n-1}`, then negative root vectors
/// `E_{ji}` in the same `(i, j)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlBasis {
    n: usize,
    elems: Vec<SlElem>,
    index: HashMap<SlElem, usize>,
}

impl SlBasis {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let mut elems: Vec<SlElem> = pairs.iter().map(|&(i, j)| SlElem::E(i, j)).collect();
        elems.extend((0..n.saturating_sub(1)).map(SlElem::H));
        elems.extend(pairs.iter().map(|&(i, j)| SlElem::E(j, i)));
        let index = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        SlBasis { n, elems, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[SlElem] {
        &self.elems
    }

    pub fn index_of(&self, e: SlElem) -> usize {
        self.index[&e]
    }

    /// Root of a basis element in simple-root coordinates (zero for `H_k`).
    pub fn root(&self, e: SlElem) -> Vec<i64> {
        let mut r = vec![0; self.n - 1];
        if let SlElem::E(i, j) = e {
            let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
            for c in r.iter_mut().take(hi).skip(lo) {
                *c = s;
            }
        }
        r
    }

    pub fn unit(&self, e: SlElem) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[self.index_of(e)] = Q::one();
        v
    }

    /// Coordinates of a traceless `n×n` matrix, given by its nonzero entries.
    pub fn coords_of_matrix(&self, entries: &BTreeMap<(usize, usize), Q>) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        let mut running = Q::zero();
        let mut diag = vec![Q::zero(); self.n];
        for (&(i, j), c) in entries {
            if i == j {
                diag[i] += c;
            } else {
                v[self.index_of(SlElem::E(i, j))] += c;
            }
        }
        for k in 0..self.n.saturating_sub(1) {
            running += &diag[k];
            v[self.index_of(SlElem::H(k))] = running.clone();
        }
        debug_assert!((running + &diag[self.n - 1]).is_zero(), "matrix is not traceless");
        v
    }

    fn matrix_of(&self, e: SlElem) -> BTreeMap<(usize, usize), Q> {
        let mut m = BTreeMap::new();
        match e {
            SlElem::E(i, j) => {
                m.insert((i, j), Q::one());
            }
            SlElem::H(k) => {
                m.insert((k, k), Q::one());
                m.insert((k + 1, k + 1), -Q::one());
            }
        }
        m
    }

    /// Structure constants: coordinates of `[a, b]`.
    pub fn bracket(&self, a: SlElem, b: SlElem) -> Vec<Q> {
        let (ma, mb) = (self.matrix_of(a), self.matrix_of(b));
        let mut out: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (&(i, j), x) in &ma {
            for (&(k, l), y) in &mb {
                if j == k {
                    *out.entry((i, l)).or_insert_with(Q::zero) += x * y;
                }
                if l == i {
                    *out.entry((k, j)).or_insert_with(Q::zero) -= x * y;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        self.coords_of_matrix(&out)
    }
}

/// Sparse square matrix stored by columns: `cols[j]` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    dim: usize,
    cols: Vec<Vec<(usize, Q)>>,
}

impl SparseMat {
    fn from_cols(dim: usize, cols: Vec<BTreeMap<usize, Q>>) -> Self {
        SparseMat {
            dim,
            cols: cols
                .into_iter()
                .map(|c| c.into_iter().filter(|(_, x)| !x.is_zero()).collect())
                .collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SparseMat {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn col(&self, j: usize) -> &[(usize, Q)] {
        &self.cols[j]
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += a * x;
            }
        }
        out
    }

    pub fn entry(&self, i: usize, j: usize) -> Q {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn compose(&self, other: &SparseMat) -> SparseMat {
        let cols = (0..self.dim)
            .map(|j| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, b) in &other.cols[j] {
                    for (i, a) in &self.cols[*k] {
                        *acc.entry(*i).or_insert_with(Q::zero) += a * b;
                    }
                }
                acc
            })
            .collect();
        SparseMat::from_cols(self.dim, cols)
    }

    pub fn linear_comb(terms: &[(Q, &SparseMat)], dim: usize) -> SparseMat {
        let cols = (0..dim)
            .map(|j| {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (c, m) in terms {
                    for (i, a) in &m.cols[j] {
                        *acc.entry(*i).or_insert_with(Q::zero) += c * a;
                    }
                }
                acc
            })
            .collect();
        SparseMat::from_cols(dim, cols)
    }

    pub fn commutator(&self, other: &SparseMat) -> SparseMat {
        let ab = self.compose(other);
        let ba = other.compose(self);
        SparseMat::linear_comb(&[(Q::one(), &ab), (-Q::one(), &ba)], self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }
}

/// A module expression, e.g. `sum(natural(4),ext(2,natural(4)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    Natural(usize),
    Trivial(usize),
    Adjoint(usize),
    Sym(usize, Box<ModuleExpr>),
    Ext(usize, Box<ModuleExpr>),
    Tensor(Vec<ModuleExpr>),
    Dual(Box<ModuleExpr>),
    Sum(Vec<ModuleExpr>),
}

impl ModuleExpr {
    pub fn parse(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            bail!(Usage, "trailing input in module expression '{}'", s);
        }
        Ok(e)
    }

    /// The `n` of the ambient `sl_n`, checked for consistency.
    pub fn n(&self) -> Result<usize> {
        let ns = |es: &[ModuleExpr]| -> Result<usize> {
            let mut it = es.iter().map(ModuleExpr::n);
            let first = it.next().ok_or_else(|| Error::Usage("empty argument list".into()))??;
            for other in it {
                if other? != first {
                    bail!(Validation, "module expression mixes different sl_n");
                }
            }
            Ok(first)
        };
        match self {
            ModuleExpr::Natural(n) | ModuleExpr::Trivial(n) | ModuleExpr::Adjoint(n) => Ok(*n),
            ModuleExpr::Sym(_, m) | ModuleExpr::Ext(_, m) | ModuleExpr::Dual(m) => m.n(),
            ModuleExpr::Tensor(es) | ModuleExpr::Sum(es) => ns(es),
        }
    }

    /// Dimension, saturating on overflow.
    pub fn dim(&self) -> usize {
        match self {
            ModuleExpr::Natural(n) => *n,
            ModuleExpr::Trivial(_) => 1,
            ModuleExpr::Adjoint(n) => n * n - 1,
            ModuleExpr::Sym(k, m) => binomial(m.dim().saturating_add(*k).saturating_sub(1), *k),
            ModuleExpr::Ext(k, m) => binomial(m.dim(), *k),
            ModuleExpr::Tensor(es) => es.iter().fold(1usize, |a, e| a.saturating_mul(e.dim())),
            ModuleExpr::Dual(m) => m.dim(),
            ModuleExpr::Sum(es) => es.iter().fold(0usize, |a, e| a.saturating_add(e.dim())),
        }
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |es: &[ModuleExpr]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        match self {
            ModuleExpr::Natural(n) => write!(f, "natural({n})"),
            ModuleExpr::Trivial(n) => write!(f, "trivial({n})"),
            ModuleExpr::Adjoint(n) => write!(f, "adjoint({n})"),
            ModuleExpr::Sym(k, m) => write!(f, "sym({k},{m})"),
            ModuleExpr::Ext(k, m) => write!(f, "ext({k},{m})"),
            ModuleExpr::Tensor(es) => write!(f, "tensor({})", join(es)),
            ModuleExpr::Dual(m) => write!(f, "dual({m})"),
            ModuleExpr::Sum(es) => write!(f, "sum({})", join(es)),
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Open,
    Close,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse()
                    .map_err(|_| Error::Usage(format!("number too large: {text}")))?;
                out.push(Tok::Num(n));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => bail!(Usage, "unexpected character '{}' in module expression", other),
        }
    }
    Ok(out)
}

enum Arg {
    Num(usize),
    Expr(ModuleExpr),
}

fn parse_expr(toks: &[Tok], pos: &mut usize) -> Result<ModuleExpr> {
    let name = match toks.get(*pos) {
        Some(Tok::Ident(s)) => s.to_ascii_lowercase(),
        _ => bail!(Usage, "expected a module constructor name"),
    };
    *pos += 1;
    if toks.get(*pos) != Some(&Tok::Open) {
        bail!(Usage, "expected '(' after {}", name);
    }
    *pos += 1;
    let mut args = Vec::new();
    loop {
        match toks.get(*pos) {
            Some(Tok::Num(n)) => {
                args.push(Arg::Num(*n));
                *pos += 1;
            }
            Some(Tok::Ident(_)) => args.push(Arg::Expr(parse_expr(toks, pos)?)),
            _ => bail!(Usage, "expected an argument to {}", name),
        }
        match toks.get(*pos) {
            Some(Tok::Comma) => *pos += 1,
            Some(Tok::Close) => {
                *pos += 1;
                break;
            }
            _ => bail!(Usage, "expected ',' or ')' in arguments of {}", name),
        }
    }
    let bad = || Error::Usage(format!("wrong arguments to {name}"));
    let mut it = args.into_iter();
    let e = match name.as_str() {
        "natural" | "trivial" | "adjoint" => {
            let n = match (it.next(), it.next()) {
                (Some(Arg::Num(n)), None) if n >= 2 => n,
                _ => return Err(bad()),
            };
            match name.as_str() {
                "natural" => ModuleExpr::Natural(n),
                "trivial" => ModuleExpr::Trivial(n),
                _ => ModuleExpr::Adjoint(n),
            }
        }
        "sym" | "ext" => match (it.next(), it.next(), it.next()) {
            (Some(Arg::Num(k)), Some(Arg::Expr(m)), None) => {
                if name == "sym" {
                    ModuleExpr::Sym(k, Box::new(m))
                } else {
                    ModuleExpr::Ext(k, Box::new(m))
                }
            }
            _ => return Err(bad()),
        },
        "dual" => match (it.next(), it.next()) {
            (Some(Arg::Expr(m)), None) => ModuleExpr::Dual(Box::new(m)),
            _ => return Err(bad()),
        },
        "tensor" | "sum" => {
            let es: Vec<ModuleExpr> = it
                .map(|a| match a {
                    Arg::Expr(e) => Ok(e),
                    Arg::Num(_) => Err(bad()),
                })
                .collect::<Result<_>>()?;
            if es.is_empty() || (name == "tensor" && es.len() < 2) {
                return Err(bad());
            }
            if name == "sum" {
                ModuleExpr::Sum(es)
            } else {
                ModuleExpr::Tensor(es)
            }
        }
        other => bail!(Usage, "unknown module constructor '{}'", other),
    };
    Ok(e)
}

/// Working representation during construction: one action matrix per
/// Chevalley basis element, plus basis labels and direct-sum blocks.
struct Raw {
    dim: usize,
    actions: Vec<SparseMat>,
    labels: Vec<String>,
    blocks: Vec<Range<usize>>,
}

fn build_raw(expr: &ModuleExpr, basis: &SlBasis) -> Raw {
    let n = basis.n();
    match expr {
        ModuleExpr::Natural(_) => {
            let actions = basis
                .elems()
                .iter()
                .map(|&e| {
                    let mut cols = vec![BTreeMap::new(); n];
                    for ((i, j), c) in basis.matrix_of(e) {
                        cols[j].insert(i, c);
                    }
                    SparseMat::from_cols(n, cols)
                })
                .collect();
            Raw {
                dim: n,
                actions,
                labels: (1..=n).map(|i| format!("e{i}")).collect(),
                blocks: vec![0..n],
            }
        }
        ModuleExpr::Trivial(_) => Raw {
            dim: 1,
            actions: vec![SparseMat::zero(1); basis.dim()],
            labels: vec!["1".into()],
            blocks: vec![0..1],
        },
        ModuleExpr::Adjoint(_) => {
            let d = basis.dim();
            let actions = basis
                .elems()
                .iter()
                .map(|&x| {
                    let cols = basis
                        .elems()
                        .iter()
                        .map(|&y| {
                            basis
                                .bracket(x, y)
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .collect()
                        })
                        .collect();
                    SparseMat::from_cols(d, cols)
                })
                .collect();
            Raw {
                dim: d,
                actions,
                labels: basis.elems().iter().map(|e| e.to_string()).collect(),
                blocks: vec![0..d],
            }
        }
        ModuleExpr::Sym(k, m) => {
            let inner = build_raw(m, basis);
            let monos = multisets(inner.dim, *k);
            let index: HashMap<Vec<usize>, usize> =
                monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            let actions = inner
                .actions
                .iter()
                .map(|x| {
                    let cols = monos
                        .iter()
                        .map(|mono| {
                            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                            for p in 0..mono.len() {
                                for (r, c) in x.col(mono[p]) {
                                    let mut t = mono.clone();
                                    t[p] = *r;
                                    t.sort_unstable();
                                    *acc.entry(index[&t]).or_insert_with(Q::zero) += c;
                                }
                            }
                            acc
                        })
                        .collect();
                    SparseMat::from_cols(monos.len(), cols)
                })
                .collect();
            let labels = monos.iter().map(|m| monomial_label(m, &inner.labels)).collect();
            Raw {
                dim: monos.len(),
                actions,
                labels,
                blocks: vec![0..monos.len()],
            }
        }
        ModuleExpr::Ext(k, m) => {
            let inner = build_raw(m, basis);
            let wedges = subsets(inner.dim, *k);
            let index: HashMap<Vec<usize>, usize> =
                wedges.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            let actions = inner
                .actions
                .iter()
                .map(|x| {
                    let cols = wedges
                        .iter()
                        .map(|w| {
                            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                            for p in 0..w.len() {
                                for (r, c) in x.col(w[p]) {
                                    if w.iter().enumerate().any(|(s, &v)| s != p && v == *r) {
                                        continue;
                                    }
                                    let mut t = w.clone();
                                    t[p] = *r;
                                    let odd = sort_parity(&mut t);
                                    let entry = acc.entry(index[&t]).or_insert_with(Q::zero);
                                    if odd {
                                        *entry -= c;
                                    } else {
                                        *entry += c;
                                    }
                                }
                            }
                            acc
                        })
                        .collect();
                    SparseMat::from_cols(wedges.len(), cols)
                })
                .collect();
            let labels = wedges
                .iter()
                .map(|w| {
                    if w.is_empty() {
                        "1".to_string()
                    } else {
                        w.iter().map(|&i| inner.labels[i].as_str()).collect::<Vec<_>>().join("∧")
                    }
                })
                .collect();
            Raw {
                dim: wedges.len(),
                actions,
                labels,
                blocks: vec![0..wedges.len()],
            }
        }
        ModuleExpr::Tensor(es) => {
            let mut acc = build_raw(&es[0], basis);
            for e in &es[1..] {
                let b = build_raw(e, basis);
                let d = acc.dim * b.dim;
                let actions = acc
                    .actions
                    .iter()
                    .zip(&b.actions)
                    .map(|(xa, xb)| {
                        let cols = (0..d)
                            .map(|idx| {
                                let (i, j) = (idx / b.dim, idx % b.dim);
                                let mut col: BTreeMap<usize, Q> = BTreeMap::new();
                                for (r, c) in xa.col(i) {
                                    *col.entry(r * b.dim + j).or_insert_with(Q::zero) += c;
                                }
                                for (r, c) in xb.col(j) {
                                    *col.entry(i * b.dim + r).or_insert_with(Q::zero) += c;
                                }
                                col
                            })
                            .collect();
                        SparseMat::from_cols(d, cols)
                    })
                    .collect();
                let labels = acc
                    .labels
                    .iter()
                    .flat_map(|la| b.labels.iter().map(move |lb| format!("{la}⊗{lb}")))
                    .collect();
                acc = Raw {
                    dim: d,
                    actions,
                    labels,
                    blocks: vec![0..d],
                };
            }
            acc
        }
        ModuleExpr::Dual(m) => {
            let inner = build_raw(m, basis);
            let d = inner.dim;
            let actions = inner
                .actions
                .iter()
                .map(|x| {
                    let mut cols = vec![BTreeMap::new(); d];
                    for j in 0..d {
                        for (i, c) in x.col(j) {
                            cols[*i].insert(j, -c.clone());
                        }
                    }
                    SparseMat::from_cols(d, cols)
                })
                .collect();
            Raw {
                dim: d,
                actions,
                labels: inner.labels.iter().map(|l| format!("{l}*")).collect(),
                blocks: vec![0..d],
            }
        }
        ModuleExpr::Sum(es) => {
            let parts: Vec<Raw> = es.iter().map(|e| build_raw(e, basis)).collect();
            let d: usize = parts.iter().map(|p| p.dim).sum();
            let mut offsets = Vec::new();
            let mut off = 0;
            for p in &parts {
                offsets.push(off);
                off += p.dim;
            }
            let actions = (0..basis.dim())
                .map(|k| {
                    let mut cols = Vec::with_capacity(d);
                    for (p, &o) in parts.iter().zip(&offsets) {
                        for j in 0..p.dim {
                            cols.push(p.actions[k].col(j).iter().map(|(i, c)| (i + o, c.clone())).collect());
                        }
                    }
                    SparseMat::from_cols(d, cols)
                })
                .collect();
            let labels = parts.iter().flat_map(|p| p.labels.iter().cloned()).collect();
            let blocks = parts
                .iter()
                .zip(&offsets)
                .flat_map(|(p, &o)| p.blocks.iter().map(move |r| r.start + o..r.end + o))
                .collect();
            Raw {
                dim: d,
                actions,
                labels,
                blocks,
            }
        }
    }
}

fn monomial_label(mono: &[usize], labels: &[String]) -> String {
    if mono.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < mono.len() {
        let mut j = i;
        while j < mono.len() && mono[j] == mono[i] {
            j += 1;
        }
        let l = &labels[mono[i]];
        parts.push(if j - i == 1 { l.clone() } else { format!("{l}^{}", j - i) });
        i = j;
    }
    parts.join("*")
}

/// Non-decreasing `k`-tuples over `0..d`, lexicographic.
fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(d, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing `k`-tuples over `0..d`, lexicographic.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(d, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Sorts in place and reports whether the permutation used was odd.
fn sort_parity(t: &mut [usize]) -> bool {
    let mut odd = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

/// A finite-dimensional `sl_n`-module with a weight basis.
#[derive(Debug, Clone)]
pub struct ExplicitModule {
    rd: RootDatum,
    sl: SlBasis,
    dim: usize,
    basis_weights: Vec<Weight>,
    labels: Vec<String>,
    actions: Vec<SparseMat>,
    blocks: Vec<Range<usize>>,
}

/// Builds the module described by `expr` over the type-A datum `rd`.
pub fn build_module(rd: &RootDatum, expr: &ModuleExpr, cap: usize) -> Result<ExplicitModule> {
    if !rd.is_type_a() {
        bail!(Validation, "explicit modules require a type-A root datum, got {}", rd.label());
    }
    let n = expr.n()?;
    if n != rd.rank() + 1 {
        bail!(Validation, "expression lives over sl_{} but root datum has rank {}", n, rd.rank());
    }
    let dim = expr.dim();
    if dim > cap {
        bail!(Resource, "module dimension {} exceeds cap {}", dim, cap);
    }
    if dim == 0 {
        bail!(Validation, "module expression {} is zero-dimensional", expr);
    }
    let sl = SlBasis::new(n);
    let raw = build_raw(expr, &sl);
    let basis_weights = (0..raw.dim)
        .map(|j| {
            Weight(
                (0..n - 1)
                    .map(|k| {
                        let h = &raw.actions[sl.index_of(SlElem::H(k))];
                        to_i64(&h.entry(j, j)).expect("integral weights")
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(ExplicitModule {
        rd: rd.clone(),
        sl,
        dim: raw.dim,
        basis_weights,
        labels: raw.labels,
        actions: raw.actions,
        blocks: raw.blocks,
    })
}

impl ExplicitModule {
    pub fn parse(rd: &RootDatum, expr: &str) -> Result<Self> {
        build_module(rd, &ModuleExpr::parse(expr)?, DEFAULT_MODULE_CAP)
    }

    /// `V(n) = Sym^n k²` for `SL(2)`, basis `x^n, x^{n-1}y, …, y^n`.
    pub fn a1_irreducible(n: usize) -> Result<Self> {
        let rd = RootDatum::from_label("A1")?;
        build_module(
            &rd,
            &ModuleExpr::Sym(n, Box::new(ModuleExpr::Natural(2))),
            DEFAULT_MODULE_CAP,
        )
    }

    pub fn rd(&self) -> &RootDatum {
        &self.rd
    }

    pub fn sl(&self) -> &SlBasis {
        &self.sl
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_weights(&self) -> &[Weight] {
        &self.basis_weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Ranges of the top-level direct summands.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn action(&self, e: SlElem) -> &SparseMat {
        &self.actions[self.sl.index_of(e)]
    }

    pub fn e(&self, i: usize) -> &SparseMat {
        self.action(SlElem::E(i, i + 1))
    }

    pub fn f(&self, i: usize) -> &SparseMat {
        self.action(SlElem::E(i + 1, i))
    }

    pub fn h(&self, i: usize) -> &SparseMat {
        self.action(SlElem::H(i))
    }

    /// Action of the `sl_n` element with Chevalley coordinates `xi` on `v`.
    pub fn act(&self, xi: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (c, m) in xi.iter().zip(&self.actions) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(m.apply(v)) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    /// Basis vector indices of weight `mu`.
    pub fn weight_indices(&self, mu: &Weight) -> Vec<usize> {
        (0..self.dim).filter(|&j| &self.basis_weights[j] == mu).collect()
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut ws = self.basis_weights.clone();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Checks the Chevalley relations and Serre relations as matrix
    /// identities, and that each `H_i` is diagonal with the basis weights.
    pub fn check_brackets(&self) -> Result<()> {
        let r = self.rd.rank();
        let cartan = self.rd.cartan();
        for i in 0..r {
            let h = self.h(i);
            for j in 0..self.dim {
                for (row, c) in h.col(j) {
                    if *row != j || *c != q(self.basis_weights[j].0[i]) {
                        bail!(Inconsistent, "H{} is not diagonal with the basis weights", i + 1);
                    }
                }
            }
            for j in 0..r {
                let a = q(cartan[j][i]);
                let lhs = h.commutator(self.e(j));
                let rhs = SparseMat::linear_comb(&[(a.clone(), self.e(j))], self.dim);
                if lhs != rhs {
                    bail!(Inconsistent, "[H{}, E{}] != {}·E{}", i + 1, j + 1, a, j + 1);
                }
                let lhs = h.commutator(self.f(j));
                let rhs = SparseMat::linear_comb(&[(-a.clone(), self.f(j))], self.dim);
                if lhs != rhs {
                    bail!(Inconsistent, "[H{}, F{}] != -{}·F{}", i + 1, j + 1, a, j + 1);
                }
                let ef = self.e(i).commutator(self.f(j));
                let expect_ef = if i == j { h.clone() } else { SparseMat::zero(self.dim) };
                if ef != expect_ef {
                    bail!(Inconsistent, "[E{}, F{}] has the wrong value", i + 1, j + 1);
                }
                if i != j {
                    let steps = (1 - cartan[j][i]) as usize;
                    for (x, y, tag) in [(self.e(i), self.e(j), "E"), (self.f(i), self.f(j), "F")] {
                        let mut acc = y.clone();
                        for _ in 0..steps {
                            acc = x.commutator(&acc);
                        }
                        if !acc.is_zero() {
                            bail!(Inconsistent, "Serre relation fails for {}{}, {}{}", tag, i + 1, tag, j + 1);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// For each dominant weight `λ`, a basis of `⋂_i ker E_i` inside the
    /// `λ`-weight space. Weights with no highest weight vectors are omitted.
    pub fn highest_weight_vectors(&self) -> BTreeMap<Weight, Vec<Vec<Q>>> {
        self.highest_weight_vectors_in(0..self.dim)
    }

    /// Highest weight vectors supported on the basis indices in `range`.
    pub fn highest_weight_vectors_in(&self, range: Range<usize>) -> BTreeMap<Weight, Vec<Vec<Q>>> {
        let mut out = BTreeMap::new();
        for mu in self.distinct_weights() {
            if !mu.is_dominant() {
                continue;
            }
            let idx: Vec<usize> = self
                .weight_indices(&mu)
                .into_iter()
                .filter(|j| range.contains(j))
                .collect();
            if idx.is_empty() {
                continue;
            }
            let mut rows = Vec::new();
            for i in 0..self.rd.rank() {
                let e = self.e(i);
                for r in 0..self.dim {
                    let row: Vec<Q> = idx.iter().map(|&j| e.entry(r, j)).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
            let ker = linalg::kernel(&rows, idx.len());
            if ker.is_empty() {
                continue;
            }
            let vecs = ker
                .into_iter()
                .map(|k| {
                    let mut v = vec![Q::zero(); self.dim];
                    for (c, &j) in k.into_iter().zip(&idx) {
                        v[j] = c;
                    }
                    v
                })
                .collect();
            out.insert(mu, vecs);
        }
        out
    }

    /// The highest weight of the top-level summand `block`, when that summand
    /// is irreducible (exactly one highest weight vector).
    pub fn block_highest_weight(&self, block: usize) -> Option<Weight> {
        let hw = self.highest_weight_vectors_in(self.blocks[block].clone());
        let total: usize = hw.values().map(Vec::len).sum();
        if total == 1 {
            hw.into_keys().next()
        } else {
            None
        }
    }

    /// `U`-coinvariants `M / Σ_i E_i M`, weight space by weight space.
    pub fn u_coinvariants(&self) -> Coinvariants {
        let mut reps = Vec::new();
        for mu in self.distinct_weights() {
            let idx = self.weight_indices(&mu);
            let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &j)| (j, p)).collect();
            let mut image = Vec::new();
            for i in 0..self.rd.rank() {
                let e = self.e(i);
                let src = &mu - &self.rd.simple_root(i);
                for j in self.weight_indices(&src) {
                    let mut v = vec![Q::zero(); idx.len()];
                    for (r, c) in e.col(j) {
                        v[pos[r]] += c;
                    }
                    image.push(v);
                }
            }
            let sub = Subspace::span(idx.len(), &image);
            let mut is_pivot = vec![false; idx.len()];
            for &p in sub.pivots() {
                is_pivot[p] = true;
            }
            for (p, &j) in idx.iter().enumerate() {
                if !is_pivot[p] {
                    let mut v = vec![Q::zero(); self.dim];
                    v[j] = Q::one();
                    reps.push((mu.clone(), v));
                }
            }
        }
        Coinvariants { representatives: reps }
    }

    fn check_vector(&self, x: &[Q]) -> Result<()> {
        if x.len() != self.dim {
            bail!(Validation, "vector has length {}, module has dimension {}", x.len(), self.dim);
        }
        Ok(())
    }

    /// `𝔤·x` as a subspace of the module.
    pub fn orbit_tangent(&self, x: &[Q]) -> Result<Subspace> {
        self.check_vector(x)?;
        if x.iter().all(Zero::is_zero) {
            bail!(Precondition, "orbit tangent requires a nonzero vector");
        }
        let images: Vec<Vec<Q>> = self.actions.iter().map(|m| m.apply(x)).collect();
        Ok(Subspace::span(self.dim, &images))
    }

    /// Basis (in Chevalley coordinates) of the isotropy Lie algebra `𝔤_x`.
    pub fn stabilizer_lie(&self, x: &[Q]) -> Result<Vec<Vec<Q>>> {
        self.check_vector(x)?;
        let images: Vec<Vec<Q>> = self.actions.iter().map(|m| m.apply(x)).collect();
        let rows: Vec<Vec<Q>> = (0..self.dim)
            .map(|r| images.iter().map(|v| v[r].clone()).collect())
            .collect();
        Ok(linalg::kernel(&rows, self.sl.dim()))
    }

    /// Indices of basis vectors whose weight passes every congruence of `stab`.
    fn congruence_mask(&self, stab: &StabilizerSpec) -> Vec<bool> {
        self.basis_weights.iter().map(|w| stab.passes(w)).collect()
    }

    /// `M^{G_x}` for the stabilizer described by `stab`.
    pub fn fixed_subspace(&self, stab: &StabilizerSpec) -> Result<Subspace> {
        stab.check(self)?;
        let mask = self.congruence_mask(stab);
        Ok(self.fixed_subspace_in(stab, &mask))
    }

    pub(crate) fn fixed_subspace_in(&self, stab: &StabilizerSpec, allowed: &[bool]) -> Subspace {
        let mask: Vec<bool> = self
            .congruence_mask(stab)
            .into_iter()
            .zip(allowed)
            .map(|(a, b)| a && *b)
            .collect();
        let idx: Vec<usize> = (0..self.dim).filter(|&j| mask[j]).collect();
        let cols: Vec<Vec<Vec<Q>>> = stab
            .lie_part
            .iter()
            .map(|xi| {
                idx.iter()
                    .map(|&j| self.act(xi, &linalg::unit_vectors(self.dim, [j])[0]))
                    .collect()
            })
            .collect();
        let mut rows = Vec::new();
        for per_xi in &cols {
            for r in 0..self.dim {
                let row: Vec<Q> = per_xi.iter().map(|v| v[r].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let ker = linalg::kernel(&rows, idx.len());
        let vecs: Vec<Vec<Q>> = ker
            .iter()
            .map(|k| {
                let mut v = vec![Q::zero(); self.dim];
                for (c, &j) in k.iter().zip(&idx) {
                    v[j] = c.clone();
                }
                v
            })
            .collect();
        Subspace::span(self.dim, &vecs)
    }

    /// `(M/S)^{G_x}` for a `G_x`-stable subspace `S`. Returns representatives
    /// in `M` of a basis of the fixed quotient.
    pub fn fixed_quotient(&self, sub: &Subspace, stab: &StabilizerSpec) -> Result<Vec<Vec<Q>>> {
        stab.check(self)?;
        Ok(self.fixed_quotient_in(stab, &vec![true; self.dim], sub, sub))
    }

    /// Fixed quotient restricted to a graded piece: `allowed` selects the
    /// basis vectors of the piece, `s_local` is the part of `S` in it, and
    /// `s_full` is all of `S` (used to test `ξ·w ∈ S`).
    pub(crate) fn fixed_quotient_in(
        &self,
        stab: &StabilizerSpec,
        allowed: &[bool],
        s_local: &Subspace,
        s_full: &Subspace,
    ) -> Vec<Vec<Q>> {
        let mask = self.congruence_mask(stab);
        let mut params: Vec<Vec<Q>> = (0..self.dim)
            .filter(|&j| mask[j] && allowed[j])
            .map(|j| linalg::unit_vectors(self.dim, [j]).remove(0))
            .collect();
        params.extend(s_local.basis().iter().cloned());
        if params.is_empty() {
            return Vec::new();
        }
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for xi in &stab.lie_part {
            let images: Vec<Vec<Q>> = params.iter().map(|w| s_full.reduce(&self.act(xi, w))).collect();
            for r in 0..self.dim {
                let row: Vec<Q> = images.iter().map(|v| v[r].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let vecs: Vec<Vec<Q>> = linalg::kernel(&rows, params.len())
            .iter()
            .map(|k| combine(&params, k, self.dim))
            .collect();
        let fixed = Subspace::span(self.dim, &vecs).sum(s_local);
        s_local.complement_in(&fixed)
    }
}

/// U-coinvariants: representatives (basis vectors) of `M / Σ E_i M` with their weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coinvariants {
    pub representatives: Vec<(Weight, Vec<Q>)>,
}

impl Coinvariants {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// A weight congruence `⟨functional, μ⟩ ≡ 0 (mod modulus)` on fundamental
/// coordinates; modulus 0 demands exact vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub functional: Vec<i64>,
    pub modulus: u64,
}

impl Congruence {
    pub fn passes(&self, w: &Weight) -> bool {
        let v: i64 = self.functional.iter().zip(&w.0).map(|(a, b)| a * b).sum();
        if self.modulus == 0 {
            v == 0
        } else {
            v.rem_euclid(self.modulus as i64) == 0
        }
    }
}

/// Description of an isotropy group `G_x`: its Lie algebra plus a
/// diagonalizable factor given by weight congruences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StabilizerSpec {
    pub lie_part: Vec<Vec<Q>>,
    pub diag_part: Vec<Congruence>,
}

impl StabilizerSpec {
    /// `Lie(U)`: all positive root vectors of `sl_n`.
    pub fn unipotent(sl: &SlBasis) -> Self {
        let lie_part = sl
            .elems()
            .iter()
            .filter(|e| matches!(e, SlElem::E(i, j) if i < j))
            .map(|&e| sl.unit(e))
            .collect();
        StabilizerSpec {
            lie_part,
            diag_part: Vec::new(),
        }
    }

    pub fn with_congruence(mut self, functional: Vec<i64>, modulus: u64) -> Self {
        self.diag_part.push(Congruence { functional, modulus });
        self
    }

    pub fn passes(&self, w: &Weight) -> bool {
        self.diag_part.iter().all(|c| c.passes(w))
    }

    fn check(&self, m: &ExplicitModule) -> Result<()> {
        if let Some(v) = self.lie_part.iter().find(|v| v.len() != m.sl.dim()) {
            bail!(Validation, "stabilizer vector has length {}, expected {}", v.len(), m.sl.dim());
        }
        if let Some(c) = self.diag_part.iter().find(|c| c.functional.len() != m.rd.rank()) {
            bail!(Validation, "congruence functional has length {}, expected {}", c.functional.len(), m.rd.rank());
        }
        Ok(())
    }

    pub(crate) fn check_for(&self, m: &ExplicitModule) -> Result<()> {
        self.check(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn a(n: usize) -> RootDatum {
        RootDatum::from_label(&format!("A{}", n)).unwrap()
    }

    fn unit(dim: usize, j: usize) -> Vec<Q> {
        linalg::unit_vectors(dim, [j]).remove(0)
    }

    #[test]
    fn parse_and_display() {
        let e = ModuleExpr::parse("sum(natural(4), ext(2,natural(4)),ext(3,natural(4)))").unwrap();
        assert_eq!(e.to_string(), "sum(natural(4),ext(2,natural(4)),ext(3,natural(4)))");
        assert_eq!(e.dim(), 14);
        assert!(ModuleExpr::parse("sym(2)").is_err());
        assert!(ModuleExpr::parse("foo(3)").is_err());
        assert!(ModuleExpr::parse("natural(3) x").is_err());
        assert!(ModuleExpr::parse("sum(natural(2),natural(3))").unwrap().n().is_err());
    }

    #[test]
    fn dimensions_and_weights() {
        let m = ExplicitModule::parse(&a(3), "ext(2,natural(4))").unwrap();
        assert_eq!(m.dim(), 6);
        let m = ExplicitModule::parse(&a(1), "sym(2,natural(2))").unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.basis_weights(), &[Weight(vec![2]), Weight(vec![0]), Weight(vec![-2])]);
        assert_eq!(m.labels(), &["e1^2", "e1*e2", "e2^2"]);
        let m = ExplicitModule::parse(&a(3), "sum(natural(4),ext(2,natural(4)),ext(3,natural(4)))").unwrap();
        assert_eq!(m.dim(), 14);
        assert_eq!(m.blocks().len(), 3);
    }

    #[test]
    fn errors() {
        let b2 = RootDatum::from_label("B2").unwrap();
        assert!(ExplicitModule::parse(&b2, "natural(3)").is_err());
        assert!(ExplicitModule::parse(&a(2), "natural(4)").is_err());
        let err = build_module(&a(3), &ModuleExpr::parse("sym(6,natural(4))").unwrap(), 50).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn bracket_relations_hold() {
        for (r, e) in [
            (1, "sym(3,natural(2))"),
            (2, "tensor(natural(3),dual(natural(3)))"),
            (3, "sum(natural(4),ext(2,natural(4)),ext(3,natural(4)))"),
            (2, "adjoint(3)"),
            (2, "sym(2,ext(2,natural(3)))"),
            (3, "trivial(4)"),
        ] {
            ExplicitModule::parse(&a(r), e).unwrap().check_brackets().unwrap();
        }
    }

    #[test]
    fn natural_highest_weight() {
        let m = ExplicitModule::parse(&a(3), "natural(4)").unwrap();
        let hw = m.highest_weight_vectors();
        assert_eq!(hw.len(), 1);
        assert_eq!(hw[&Weight(vec![1, 0, 0])], vec![unit(4, 0)]);
    }

    #[test]
    fn tensor_square_of_natural_a1() {
        let m = ExplicitModule::parse(&a(1), "tensor(natural(2),natural(2))").unwrap();
        let hw = m.highest_weight_vectors();
        assert_eq!(hw.keys().cloned().collect::<Vec<_>>(), vec![Weight(vec![0]), Weight(vec![2])]);
        assert!(hw.values().all(|v| v.len() == 1));
    }

    #[test]
    fn binary_forms_irreducible() {
        for n in 0..6 {
            let m = ExplicitModule::a1_irreducible(n).unwrap();
            let hw = m.highest_weight_vectors();
            assert_eq!(hw.len(), 1);
            assert_eq!(hw[&Weight(vec![n as i64])], vec![unit(n + 1, 0)]);
            let co = m.u_coinvariants();
            assert_eq!(co.dim(), 1);
            assert_eq!(co.representatives[0].0, Weight(vec![-(n as i64)]));
        }
    }

    #[test]
    fn coinvariants_of_sums() {
        let m = ExplicitModule::parse(&a(1), "sum(sym(2,natural(2)),sym(4,natural(2)))").unwrap();
        assert_eq!(m.u_coinvariants().dim(), 2);
        let t = ExplicitModule::parse(&a(2), "trivial(3)").unwrap();
        let co = t.u_coinvariants();
        assert_eq!(co.dim(), 1);
        assert_eq!(co.representatives[0].1, vec![q(1)]);
    }

    #[test]
    fn orbit_tangent_of_highest_weight_binary_form() {
        for n in 1..7 {
            let m = ExplicitModule::a1_irreducible(n).unwrap();
            let x = unit(n + 1, 0);
            let t = m.orbit_tangent(&x).unwrap();
            assert_eq!(t.dim(), 2);
            assert!(t.contains(&unit(n + 1, 0)) && t.contains(&unit(n + 1, 1)));
            let stab = m.stabilizer_lie(&x).unwrap();
            assert_eq!(stab, vec![m.sl().unit(SlElem::E(0, 1))]);
        }
        let m = ExplicitModule::a1_irreducible(3).unwrap();
        assert!(m.orbit_tangent(&vec![Q::zero(); 4]).is_err());
        assert_eq!(m.stabilizer_lie(&vec![Q::zero(); 4]).unwrap().len(), 3);
    }

    fn example2() -> (ExplicitModule, Vec<Q>) {
        let m = ExplicitModule::parse(&a(3), "sum(natural(4),ext(2,natural(4)),ext(3,natural(4)))").unwrap();
        let mut x = vec![Q::zero(); 14];
        x[0] = q(1); // e1
        x[4] = q(1); // e1∧e2
        x[10] = q(1); // e1∧e2∧e3
        assert_eq!(m.labels()[4], "e1∧e2");
        assert_eq!(m.labels()[10], "e1∧e2∧e3");
        (m, x)
    }

    #[test]
    fn example2_orbit_and_stabilizer() {
        let (m, x) = example2();
        assert_eq!(m.orbit_tangent(&x).unwrap().dim(), 9);
        let stab = Subspace::span(15, &m.stabilizer_lie(&x).unwrap());
        assert_eq!(stab.dim(), 6);
        assert_eq!(stab, Subspace::span(15, &StabilizerSpec::unipotent(m.sl()).lie_part));
    }

    #[test]
    fn example2_normal_fixed_space() {
        let (m, x) = example2();
        let tangent = m.orbit_tangent(&x).unwrap();
        let stab = StabilizerSpec::unipotent(m.sl());
        let reps = m.fixed_quotient(&tangent, &stab).unwrap();
        assert_eq!(reps.len(), 2);
        let e14 = unit(14, m.labels().iter().position(|l| l == "e1∧e4").unwrap());
        let e23 = unit(14, m.labels().iter().position(|l| l == "e2∧e3").unwrap());
        let span = Subspace::span(14, &reps).sum(&tangent);
        assert!(span.contains(&e14) && span.contains(&e23));
        let independent = Subspace::span(14, &[e14, e23]).sum(&tangent);
        assert_eq!(independent, span);
    }

    #[test]
    fn fixed_subspace_with_congruence() {
        // x^{n-2}y^2 has weight n-4; it survives the μ_n congruence iff n | 4.
        for n in 2..8usize {
            let m = ExplicitModule::a1_irreducible(n).unwrap();
            let stab = StabilizerSpec::default().with_congruence(vec![1], n as u64);
            let fixed = m.fixed_subspace(&stab).unwrap();
            assert_eq!(fixed.contains(&unit(n + 1, 2)), 4 % n == 0, "n = {n}");
        }
        let m = ExplicitModule::a1_irreducible(3).unwrap();
        assert_eq!(m.fixed_subspace(&StabilizerSpec::default()).unwrap().dim(), 4);
    }

    #[test]
    fn adjoint_structure_constants() {
        let sl = SlBasis::new(3);
        let ef = sl.bracket(SlElem::E(0, 1), SlElem::E(1, 0));
        assert_eq!(ef, sl.unit(SlElem::H(0)));
        let ee = sl.bracket(SlElem::E(0, 1), SlElem::E(1, 2));
        assert_eq!(ee, sl.unit(SlElem::E(0, 2)));
        assert_eq!(sl.root(SlElem::E(0, 2)), vec![1, 1]);
        assert_eq!(sl.root(SlElem::E(2, 1)), vec![0, -1]);
    }

    #[test]
    fn exterior_power_signs() {
        let m = ExplicitModule::parse(&a(2), "ext(2,natural(3))").unwrap();
        assert_eq!(m.labels(), &["e1∧e2", "e1∧e3", "e2∧e3"]);
        let e31 = m.action(SlElem::E(2, 0));
        // E_{31}(e1∧e2) = e3∧e2 = -e2∧e3
        assert_eq!(e31.apply(&unit(3, 0)), vec![q(0), q(0), q(-1)]);
    }
}
