//! Exact rationals and their on-disk string form.
//!
//! Every rational leaving the process is written as `"numerator/denominator"`
//! in lowest terms with a positive denominator, integers included (`"6/1"`).
//! The parser also accepts a bare integer.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Rational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format).collect()
}

pub fn parse_vec<S: AsRef<str>>(v: &[S]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse(s.as_ref())).collect()
}

pub fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales `v` by a positive factor so that it becomes the primitive integer
/// vector on the same ray. The zero vector is returned unchanged.
pub fn clear_denominators(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

/// Rescales a nonnegative, nonzero vector to sum one.
pub fn normalize_sum(v: &[Rational]) -> Vec<Rational> {
    let s = sum(v);
    assert!(
        s.is_positive(),
        "normalize_sum on a vector with nonpositive sum"
    );
    v.iter().map(|x| x / &s).collect()
}

/// Serde adapter for a single rational as a `"n/d"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        format_vec(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        parse_vec(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Vec<Rational>>`.
pub mod serde_opt_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Rational>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|v| format_vec(v)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| parse_vec(&v))
            .transpose()
            .map_err(serde::de::Error::custom)
    }
}

/// A rational or `+∞`. Only ordering and min/max are meaningful on infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn is_positive(&self) -> bool {
        match self {
            ExtendedRational::Finite(q) => q.is_positive(),
            ExtendedRational::Infinity => true,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            ExtendedRational::Infinity => None,
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(q) => f.write_str(&format(q)),
            ExtendedRational::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(ExtendedRational::Infinity);
        }
        parse(&s)
            .map(ExtendedRational::Finite)
            .map_err(serde::de::Error::custom)
    }
}
