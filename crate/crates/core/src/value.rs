//! Exact non-negative rationals extended with `+inf`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Whether metric entries may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    #[default]
    Strict,
    Extended,
}

impl Mode {
    /// Combining a strict and an extended operand yields an extended result.
    pub fn join(self, other: Mode) -> Mode {
        self.max(other)
    }
}

/// A value in `[0, +inf]`. Finite values are kept in reduced form by
/// `BigRational`; the derived order puts every finite value below `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtValue {
    Finite(Rational),
    Infinite,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(Rational::zero())
    }

    pub fn int(n: u64) -> Self {
        ExtValue::Finite(Rational::from_integer(BigInt::from(n)))
    }

    /// `p/q`; panics if `q == 0`.
    pub fn ratio(p: u64, q: u64) -> Self {
        assert!(q != 0, "zero denominator");
        ExtValue::Finite(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(r: Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidInput(format!("negative value {r}")));
        }
        Ok(ExtValue::Finite(r))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinite => None,
        }
    }

    /// Multiplication by a strictly positive rational; `alpha * inf = inf`.
    pub fn scale(&self, alpha: &Rational) -> Self {
        debug_assert!(alpha.is_positive());
        match self {
            ExtValue::Finite(r) => ExtValue::Finite(r * alpha),
            ExtValue::Infinite => ExtValue::Infinite,
        }
    }

    pub fn max_of(a: &ExtValue, b: &ExtValue) -> ExtValue {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min_of(a: &ExtValue, b: &ExtValue) -> ExtValue {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Add for &ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: &ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        &self + &rhs
    }
}

impl From<u64> for ExtValue {
    fn from(n: u64) -> Self {
        ExtValue::int(n)
    }
}

/// Renders `p`, `p/q`, or `inf`.
impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{}", fmt_rational(r)),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(ExtValue::Infinite);
        }
        let r = parse_rational(s)?;
        ExtValue::from_rational(r)
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational: '{s}'"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_and_orders_last() {
        let inf = ExtValue::Infinite;
        let two = ExtValue::int(2);
        assert_eq!(&inf + &two, ExtValue::Infinite);
        assert_eq!(inf.scale(&rational(1, 3)), ExtValue::Infinite);
        assert!(two < inf);
        assert_eq!(ExtValue::max_of(&two, &inf), inf);
    }

    #[test]
    fn parse_and_render_are_canonical() {
        let v: ExtValue = "6/4".parse().unwrap();
        assert_eq!(v, ExtValue::ratio(3, 2));
        assert_eq!(v.to_string(), "3/2");
        assert_eq!("4/2".parse::<ExtValue>().unwrap().to_string(), "2");
        assert_eq!("inf".parse::<ExtValue>().unwrap(), ExtValue::Infinite);
        assert!("-1".parse::<ExtValue>().is_err());
        assert!("1/0".parse::<ExtValue>().is_err());
        assert!("x".parse::<ExtValue>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = ExtValue::ratio(1, 3);
        let b = ExtValue::ratio(1, 6);
        assert_eq!(&a + &b, ExtValue::ratio(1, 2));
        assert_eq!(a.scale(&rational(3, 1)), ExtValue::int(1));
    }
}
