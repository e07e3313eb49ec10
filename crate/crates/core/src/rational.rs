//! Exact rational scalars and their "p/q" string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        match t.trim().trim_start_matches('+').parse::<BigInt>() {
            Ok(v) => Ok(v),
            Err(_) => bail!(Usage, "malformed rational '{}'", s),
        }
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                bail!(Usage, "zero denominator in '{}'", s);
            }
            Ok(Q::new(parse_int(n)?, d))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.denom().is_one() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}

pub fn is_nonneg_integer(x: &Q) -> bool {
    x.denom().is_one() && !x.numer().is_negative()
}

pub fn fmt_qvec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(fmt_q(&q_frac(2, 3)), "2/3");
        assert_eq!(fmt_q(&q_frac(-4, 2)), "-2");
        assert_eq!(parse_q("-6/4").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_q("+7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn integrality() {
        assert!(is_nonneg_integer(&q(0)));
        assert!(!is_nonneg_integer(&q(-1)));
        assert!(!is_nonneg_integer(&q_frac(1, 2)));
        assert_eq!(to_i64(&q(5)), Some(5));
    }
}
