//! Exact rational arithmetic helpers, including the extended nonnegative
//! rationals used by pseudometrics (`∞` absorbs addition, `∞ + q = ∞`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("invalid rational `{0}`")]
    Invalid(String),
    #[error("invalid rational `{0}`: zero denominator")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or `"p"` into an exact rational; rejects zero denominators.
pub fn parse_q(s: &str) -> Result<Q, RationalError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(num).map_err(|_| RationalError::Invalid(s.to_string()))?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| RationalError::Invalid(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Q::new(n, d))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Renders as `p/q`, collapsing denominator 1 to `p`.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

/// Extended nonnegative rational: a finite value or `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtQ {
    Fin(Q),
    Inf,
}

impl ExtQ {
    pub fn zero() -> ExtQ {
        ExtQ::Fin(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtQ::Fin(v) if v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtQ::Fin(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtQ::Fin(v) => Some(v),
            ExtQ::Inf => None,
        }
    }

    /// Parses `"inf"` (or `"∞"`) or a rational literal; finite values must be ≥ 0.
    pub fn parse(s: &str) -> Result<ExtQ, RationalError> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(ExtQ::Inf);
        }
        let v = parse_q(t)?;
        if v.is_negative() {
            return Err(RationalError::Invalid(s.to_string()));
        }
        Ok(ExtQ::Fin(v))
    }
}

impl Add for ExtQ {
    type Output = ExtQ;
    fn add(self, rhs: ExtQ) -> ExtQ {
        match (self, rhs) {
            (ExtQ::Fin(a), ExtQ::Fin(b)) => ExtQ::Fin(a + b),
            _ => ExtQ::Inf,
        }
    }
}

impl Ord for ExtQ {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtQ::Fin(a), ExtQ::Fin(b)) => a.cmp(b),
            (ExtQ::Fin(_), ExtQ::Inf) => Ordering::Less,
            (ExtQ::Inf, ExtQ::Fin(_)) => Ordering::Greater,
            (ExtQ::Inf, ExtQ::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::Fin(v) => write!(f, "{v}"),
            ExtQ::Inf => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_q("3").unwrap(), q_int(3));
        assert_eq!(parse_q("-2/4").unwrap(), q(-1, 2));
        assert!(matches!(parse_q("1/0"), Err(RationalError::ZeroDenominator(_))));
        assert!(parse_q("x").is_err());
        assert_eq!(format_q(&q(2, 4)), "1/2");
        assert_eq!(format_q(&q_int(5)), "5");
    }

    #[test]
    fn extended_arithmetic() {
        let half = ExtQ::Fin(q(1, 2));
        assert_eq!(half.clone() + ExtQ::Inf, ExtQ::Inf);
        assert_eq!(half.clone() + half.clone(), ExtQ::Fin(q_int(1)));
        assert!(half < ExtQ::Inf);
        assert_eq!(ExtQ::parse("inf").unwrap(), ExtQ::Inf);
        assert!(ExtQ::parse("-1/2").is_err());
    }
}
