//! Binary forms over ℚ and their transvectants, realizing the
//! Clebsch–Gordan channels of `V(a) ⊗ V(b)` for `SL(2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{bail, Result};
use crate::rational::{fmt_q, parse_q, q, Q};

/// `Σ_j coeffs[j] x^{d−j} y^j` with `d = coeffs.len() − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<Q>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.is_empty() {
            bail!(Validation, "a binary form needs at least one coefficient");
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![Q::zero(); degree + 1],
        }
    }

    /// `x^{d−j} y^j`.
    pub fn monomial(degree: usize, j: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[j] = Q::one();
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &BinaryForm) -> Result<Self> {
        if self.degree() != other.degree() {
            bail!(Validation, "cannot add forms of degrees {} and {}", self.degree(), other.degree());
        }
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &BinaryForm) -> Self {
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(BinaryForm::monomial(0, 0), |acc, _| acc.mul(self))
    }

    /// `∂^{dx+dy} f / ∂x^{dx} ∂y^{dy}`, or `None` if the order exceeds the degree.
    pub fn derivative(&self, dx: usize, dy: usize) -> Option<Self> {
        let d = self.degree();
        if dx + dy > d {
            return None;
        }
        let mut out = vec![Q::zero(); d - dx - dy + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            let (px, py) = (d - j, j);
            if c.is_zero() || px < dx || py < dy {
                continue;
            }
            let falling = |n: usize, k: usize| (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t));
            out[py - dy] += c * Q::from_integer(falling(px, dx) * falling(py, dy));
        }
        Some(BinaryForm { coeffs: out })
    }

    /// If `self = κ·other`, returns `κ`.
    pub fn ratio_to(&self, other: &BinaryForm) -> Option<Q> {
        if self.degree() != other.degree() || other.is_zero() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        let kappa = &self.coeffs[k] / &other.coeffs[k];
        (other.scale(&kappa) == *self).then_some(kappa)
    }

    /// Parses a polynomial in `x` and `y`, e.g. `x^2+y^2` or `x^4 + 1/2*x^2*y^2`.
    /// The zero form is rejected since it has no degree.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms: Vec<(Q, usize, usize)> = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut chunks = Vec::new();
        for k in 0..bytes.len() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && k > start && bytes[k - 1] != b'^' {
                chunks.push(&s[start..k]);
                start = k;
            }
        }
        chunks.push(&s[start..]);
        for chunk in chunks {
            if chunk.is_empty() {
                bail!(Validation, "malformed binary form '{}'", s);
            }
            let (mut coef, body) = match chunk.as_bytes()[0] {
                b'-' => (-Q::one(), &chunk[1..]),
                b'+' => (Q::one(), &chunk[1..]),
                _ => (Q::one(), chunk),
            };
            let (mut ex, mut ey) = (0usize, 0usize);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<usize>().map_err(|_| crate::Error::Validation(format!("bad exponent in '{}'", factor)))?),
                    None => (factor, 1),
                };
                match base {
                    "x" => ex += exp,
                    "y" => ey += exp,
                    _ => coef *= parse_q(base)?,
                }
            }
            terms.push((coef, ex, ey));
        }
        let degrees: Vec<usize> = terms.iter().filter(|t| !t.0.is_zero()).map(|t| t.1 + t.2).collect();
        let Some(&d) = degrees.first() else {
            bail!(Validation, "zero form '{}' has no degree", s);
        };
        if degrees.iter().any(|&e| e != d) {
            bail!(Validation, "form '{}' is not homogeneous", s);
        }
        let mut f = BinaryForm::zero(d);
        for (c, ex, ey) in terms {
            if ex + ey == d {
                f.coeffs[ey] += c;
            }
        }
        Ok(f)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            if d == 0 || !c.abs().is_one() {
                factors.push(fmt_q(&c.abs()));
            }
            for (var, e) in [("x", d - j), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{}^{}", var, e)),
                }
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push(format!("{}{}", sign, factors.join("*")));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let s = parts.concat();
        write!(f, "{}", s.strip_prefix('+').unwrap_or(&s))
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t) / BigInt::from(t + 1))
}

/// The `i`-th transvectant
/// `(f,g)_i = Σ_j (−1)^j C(i,j) ∂^i f/∂x^{i−j}∂y^j · ∂^i g/∂x^j∂y^{i−j}`.
pub fn transvectant(f: &BinaryForm, g: &BinaryForm, i: usize) -> Result<BinaryForm> {
    if i > f.degree().min(g.degree()) {
        bail!(Validation, "transvectant order {} exceeds min degree {}", i, f.degree().min(g.degree()));
    }
    let mut out = BinaryForm::zero(f.degree() + g.degree() - 2 * i);
    for j in 0..=i {
        let df = f.derivative(i - j, j).expect("order checked");
        let dg = g.derivative(j, i - j).expect("order checked");
        let mut sign = Q::from_integer(binomial(i, j));
        if j % 2 == 1 {
            sign = -sign;
        }
        let p = df.mul(&dg);
        for (o, c) in out.coeffs.iter_mut().zip(&p.coeffs) {
            if !c.is_zero() {
                *o += c * &sign;
            }
        }
    }
    Ok(out)
}

/// The highest-weight vector `x^n` of `V(n)`.
pub fn x_power(n: usize) -> BinaryForm {
    BinaryForm::monomial(n, 0)
}

/// A form from integer coefficients.
pub fn form(coeffs: &[i64]) -> BinaryForm {
    BinaryForm {
        coeffs: coeffs.iter().map(|&c| q(c)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zeroth_transvectant_is_product() {
        let t = transvectant(&x_power(3), &x_power(2), 0).unwrap();
        assert_eq!(t, x_power(5));
    }

    #[test]
    fn second_transvectant_of_squares() {
        let x2 = BinaryForm::parse("x^2").unwrap();
        let y2 = BinaryForm::parse("y^2").unwrap();
        let t = transvectant(&x2, &y2, 2).unwrap();
        assert_eq!(t, form(&[4]));
    }

    #[test]
    fn order_out_of_range() {
        assert!(transvectant(&x_power(1), &x_power(3), 2).is_err());
    }

    #[test]
    fn parse_and_display() {
        let f = BinaryForm::parse("x^4 + x^2*y^2").unwrap();
        assert_eq!(f, form(&[1, 0, 1, 0, 0]));
        assert_eq!(f.to_string(), "x^4+x^2*y^2");
        assert_eq!(BinaryForm::parse("-1/2*x*y").unwrap().to_string(), "-1/2*x*y");
        assert!(BinaryForm::parse("x^2+y").is_err());
    }

    #[test]
    fn discriminant_channel() {
        let v = BinaryForm::parse("x^2+y^2").unwrap();
        assert_eq!(transvectant(&v, &v, 2).unwrap(), form(&[8]));
    }

    fn arb_form(d: usize) -> impl Strategy<Value = BinaryForm> {
        proptest::collection::vec(-3i64..4, d + 1).prop_map(|c| form(&c))
    }

    proptest! {
        #[test]
        fn odd_self_transvectants_vanish(f in (1usize..6).prop_flat_map(arb_form), i in 0usize..6) {
            prop_assume!(i % 2 == 1 && i <= f.degree());
            prop_assert!(transvectant(&f, &f, i).unwrap().is_zero());
        }

        #[test]
        fn transvectant_symmetry(f in arb_form(3), g in arb_form(4), i in 0usize..4) {
            let a = transvectant(&f, &g, i).unwrap();
            let b = transvectant(&g, &f, i).unwrap();
            let sign = if i % 2 == 0 { q(1) } else { q(-1) };
            prop_assert_eq!(a, b.scale(&sign));
        }
    }
}
