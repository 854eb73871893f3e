//! Exact nonnegative rationals extended by a single absorbing `∞`.
//!
//! Every distance in the crate is an [`ExtValue`]. Values are kept in
//! reduced form, the order is total with `∞` as the maximum, and addition
//! absorbs `∞`. The textual form is `"p/q"`, `"n"` or `"inf"`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A value of `[0, ∞]` with exact rational arithmetic.
///
/// The derived order places every finite value below [`ExtValue::Inf`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtValue {
    Finite(BigRational),
    Inf,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtValue::Finite(BigRational::one())
    }

    pub fn inf() -> Self {
        ExtValue::Inf
    }

    pub fn from_int(n: u64) -> Self {
        ExtValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::BadRational(format!("{numer}/0")));
        }
        Ok(ExtValue::Finite(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    /// Wraps a signed rational, rejecting negative values.
    pub fn from_rational(q: BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Negative(q.to_string()));
        }
        Ok(ExtValue::Finite(q))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtValue::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Finite(q) if q.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtValue::Finite(q) => Some(q),
            ExtValue::Inf => None,
        }
    }

    /// `|self - other|` with the distortion conventions: `∞` when exactly
    /// one side is infinite, `0` when both are.
    pub fn abs_diff(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite((a - b).abs()),
            (ExtValue::Inf, ExtValue::Inf) => ExtValue::zero(),
            _ => ExtValue::Inf,
        }
    }

    /// `self - other` when `self >= other`, both finite.
    pub fn checked_sub(&self, other: &ExtValue) -> Option<ExtValue> {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) if a >= b => Some(ExtValue::Finite(a - b)),
            (ExtValue::Inf, ExtValue::Finite(_)) => Some(ExtValue::Inf),
            _ => None,
        }
    }

    /// Multiplication by a nonnegative rational, with `∞ · 0 = 0`.
    pub fn scale(&self, factor: &BigRational) -> ExtValue {
        debug_assert!(!factor.is_negative());
        match self {
            ExtValue::Finite(q) => ExtValue::Finite(q * factor),
            ExtValue::Inf if factor.is_zero() => ExtValue::zero(),
            ExtValue::Inf => ExtValue::Inf,
        }
    }

    pub fn half(&self) -> ExtValue {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn double(&self) -> ExtValue {
        self + self
    }

    pub fn max_of<'a>(values: impl IntoIterator<Item = &'a ExtValue>) -> ExtValue {
        values.into_iter().max().cloned().unwrap_or_else(ExtValue::zero)
    }
}

impl Add for &ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: &ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Inf,
        }
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        &self + &rhs
    }
}

impl std::iter::Sum for ExtValue {
    fn sum<I: Iterator<Item = ExtValue>>(iter: I) -> ExtValue {
        iter.fold(ExtValue::zero(), |acc, v| acc + v)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // BigRational prints integers without the "/1"
            ExtValue::Finite(q) => write!(f, "{q}"),
            ExtValue::Inf => f.write_str("inf"),
        }
    }
}

fn parse_uint(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for ExtValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s;
        if t == "inf" {
            return Ok(ExtValue::Inf);
        }
        if let Some(rest) = t.strip_prefix('-') {
            if parse_uint(rest.split('/').next().unwrap_or("")).is_some() {
                return Err(Error::Negative(t.to_string()));
            }
            return Err(Error::BadRational(t.to_string()));
        }
        let (numer, denom) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let numer = parse_uint(numer).ok_or_else(|| Error::BadRational(t.to_string()))?;
        let denom = parse_uint(denom).ok_or_else(|| Error::BadRational(t.to_string()))?;
        if denom.is_zero() {
            return Err(Error::BadRational(t.to_string()));
        }
        Ok(ExtValue::Finite(BigRational::new(numer, denom)))
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
