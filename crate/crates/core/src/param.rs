//! Exact rationals and the real-parameter type used across the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `num/den`, or just `num` for integers.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_nonpositive_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_positive()
}

/// Parses `p/q`, integers and finite decimals (optionally with exponent) exactly.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(digits);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// A real parameter that stays exact when it is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Exact(Q),
    Float(f64),
}

impl Param {
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(x) => q_to_f64(x),
            Param::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Param::Exact(x) => Some(x),
            Param::Float(_) => None,
        }
    }

    pub fn add_q(&self, c: &Q) -> Param {
        match self {
            Param::Exact(x) => Param::Exact(x + c),
            Param::Float(x) => Param::Float(x + q_to_f64(c)),
        }
    }

    pub fn mul_q(&self, c: &Q) -> Param {
        match self {
            Param::Exact(x) => Param::Exact(x * c),
            Param::Float(x) => Param::Float(x * q_to_f64(c)),
        }
    }

    pub fn add(&self, other: &Param) -> Param {
        match (self, other) {
            (Param::Exact(x), Param::Exact(y)) => Param::Exact(x + y),
            _ => Param::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn neg(&self) -> Param {
        match self {
            Param::Exact(x) => Param::Exact(-x),
            Param::Float(x) => Param::Float(-x),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Param::Exact(x) => x.is_integer(),
            Param::Float(x) => x.fract() == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Param::Exact(x) => x.is_negative(),
            Param::Float(x) => *x < 0.0,
        }
    }

    /// Twice the value is an integer.
    pub fn is_half_integer_or_integer(&self) -> bool {
        match self {
            Param::Exact(x) => (x * qi(2)).is_integer(),
            Param::Float(x) => (2.0 * x).fract() == 0.0,
        }
    }
}

impl From<Q> for Param {
    fn from(x: Q) -> Self {
        Param::Exact(x)
    }
}

impl From<i64> for Param {
    fn from(x: i64) -> Self {
        Param::Exact(qi(x))
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Float(x)
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(x) = parse_q(s) {
            return Ok(Param::Exact(x));
        }
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Param::Float)
            .ok_or_else(|| Error::InvalidParameter(format!("cannot parse `{s}` as a real number")))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(x) => f.write_str(&format_q(x)),
            Param::Float(x) => write!(f, "{}", fmt_f64(*x)),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}
