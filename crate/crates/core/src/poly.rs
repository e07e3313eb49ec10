//! Sparse multivariate polynomials over ℚ in law coefficients `m[a,b,i]`
//! and torus parameters `s_j`, with a canonical text form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// A polynomial variable: an A1 law coefficient `m[a,b,i]` (product of the
/// components of weights `a` and `b`, projected to channel `i`), or the
/// `j`-th coordinate `s_j` of a point of the affine space on the simple roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    M { a: i64, b: i64, i: i64 },
    S(usize),
}

impl Var {
    pub fn m(a: i64, b: i64, i: i64) -> Var {
        Var::M { a, b, i }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::M { a, b, i } => write!(f, "m[{},{},{}]", a, b, i),
            Var::S(j) => write!(f, "s{}", j + 1),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Var> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("m[").and_then(|r| r.strip_suffix(']')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() == 3 {
                let n: std::result::Result<Vec<i64>, _> = parts.iter().map(|p| p.trim().parse()).collect();
                if let Ok(n) = n {
                    return Ok(Var::m(n[0], n[1], n[2]));
                }
            }
        } else if let Some(j) = s.strip_prefix('s').and_then(|r| r.parse::<usize>().ok()) {
            if j >= 1 {
                return Ok(Var::S(j - 1));
            }
        }
        bail!(Validation, "malformed variable '{}'", s)
    }
}

/// A monomial: variables with positive exponents, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m: BTreeMap<Var, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *m.entry(*v).or_insert(0) += e;
        }
        Monomial(m.into_iter().collect())
    }

    /// Canonical ordering key: degree first, then the variable sequence.
    fn key(&self) -> (u32, Vec<Var>) {
        let vars = self
            .0
            .iter()
            .flat_map(|(v, e)| std::iter::repeat(*v).take(*e as usize))
            .collect();
        (self.degree(), vars)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .flat_map(|(v, e)| std::iter::repeat(v.to_string()).take(*e as usize))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// The value if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficients of the degree-one monomials.
    pub fn linear_part(&self) -> BTreeMap<Var, Q> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == 1)
            .map(|(m, c)| (m.0[0].0, c.clone()))
            .collect()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(x, _)| *x)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Substitutes polynomials for variables; unmapped variables are kept.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let base = map(*v).unwrap_or_else(|| Poly::var(*v));
                t = &t * &base.pow(*e);
            }
            out = &out + &t;
        }
        out
    }

    /// Canonical form: integer content cleared, leading term positive.
    pub fn canonical(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.terms.values().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut factor = Q::new(lcm, gcd);
        if self.leading().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Terms in print order: descending by (degree, variable sequence).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut t: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.key().cmp(&a.0.key()));
        t
    }

    fn leading(&self) -> (&Monomial, &Q) {
        self.sorted_terms()[0]
    }

    pub fn parse(s: &str) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(Poly::zero());
        }
        let mut out = Poly::zero();
        let mut chunks = Vec::new();
        let mut start = 0;
        let mut depth = 0;
        for (k, ch) in s.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                '+' | '-' if depth == 0 && k > start => {
                    chunks.push(&s[start..k]);
                    start = k;
                }
                _ => {}
            }
        }
        chunks.push(&s[start..]);
        for chunk in chunks {
            let (sign, body) = match chunk.as_bytes()[0] {
                b'-' => (-Q::one(), &chunk[1..]),
                b'+' => (Q::one(), &chunk[1..]),
                _ => (Q::one(), chunk),
            };
            let mut coef = sign;
            let mut mono = Monomial::one();
            let mut depth = 0;
            let mut fstart = 0;
            let mut factors = Vec::new();
            for (k, ch) in body.char_indices() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    '*' if depth == 0 => {
                        factors.push(&body[fstart..k]);
                        fstart = k + 1;
                    }
                    _ => {}
                }
            }
            factors.push(&body[fstart..]);
            for f in factors {
                if f.starts_with('m') || f.starts_with('s') {
                    mono = mono.mul(&Monomial::var(f.parse()?));
                } else {
                    coef *= parse_q(f)?;
                }
            }
            out.add_term(mono, coef);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = fmt_q(&c.abs());
            if first {
                first = false;
            } else {
                write!(f, " ")?;
            }
            if m.degree() == 0 {
                write!(f, "{}{}", sign, abs)?;
            } else {
                write!(f, "{}{}*{}", sign, abs, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn m(a: i64, b: i64, i: i64) -> Poly {
        Poly::var(Var::m(a, b, i))
    }

    #[test]
    fn ring_arithmetic() {
        let x = m(2, 2, 1);
        let y = m(2, 4, 2);
        let p = &(&x + &y) * &(&x - &y);
        let expect = &(&x * &x) - &(&y * &y);
        assert_eq!(p, expect);
        assert_eq!(p.degree(), 2);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn canonical_clears_content() {
        let p = &m(2, 2, 2).scale(&q_frac(-1, 2)) + &Poly::constant(q_frac(1, 3));
        let c = p.canonical();
        assert_eq!(c.to_string(), "+3*m[2,2,2] -2");
    }

    #[test]
    fn print_order_is_degree_then_vars() {
        let p = &(&m(4, 2, 1) + &(&m(2, 2, 1) * &m(2, 4, 1))) + &m(2, 2, 1);
        assert_eq!(p.to_string(), "+1*m[2,2,1]*m[2,4,1] +1*m[4,2,1] +1*m[2,2,1]");
    }

    #[test]
    fn parse_round_trip() {
        let p = &(&m(2, 2, 1).scale(&q(3)) * &m(10, 2, 1)) - &Poly::var(Var::S(0)).scale(&q_frac(5, 7));
        let back = Poly::parse(&p.to_string()).unwrap();
        assert_eq!(back, p);
        assert!(Poly::parse("+1*m[1,2]").is_err());
    }

    #[test]
    fn substitution() {
        let p = &m(2, 2, 2) * &m(2, 2, 2);
        let r = p.substitute(&|v| (v == Var::m(2, 2, 2)).then(|| Poly::constant(q(3))));
        assert_eq!(r.as_constant(), Some(q(9)));
    }
}
