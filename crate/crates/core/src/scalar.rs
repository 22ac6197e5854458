//! Exact max-plus scalars.
//!
//! A [`TropScalar`] is either a finite rational or the bottom element ε = −∞.
//! `⊕` is `max`, `⊗` is `+`, and the derived ordering puts ε below every
//! finite value, so `Ord` agrees with the semiring order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropScalar {
    /// ε, the additive identity and multiplicative absorber.
    Eps,
    Fin(BigRational),
}

impl TropScalar {
    pub fn eps() -> Self {
        TropScalar::Eps
    }

    /// The multiplicative identity `0`.
    pub fn zero() -> Self {
        TropScalar::Fin(BigRational::zero())
    }

    pub fn int(v: i64) -> Self {
        TropScalar::Fin(BigRational::from_integer(BigInt::from(v)))
    }

    /// `numer / denom`; panics if `denom` is zero.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        TropScalar::Fin(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, TropScalar::Eps)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_eps()
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            TropScalar::Eps => None,
            TropScalar::Fin(v) => Some(v),
        }
    }

    pub fn oplus(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn otimes(&self, other: &Self) -> Self {
        match (self, other) {
            (TropScalar::Fin(a), TropScalar::Fin(b)) => TropScalar::Fin(a + b),
            _ => TropScalar::Eps,
        }
    }

    pub fn oplus_prime(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical power `a^(k)`, i.e. `k·a`. `a^(0) = 0` for every `a`.
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return TropScalar::zero();
        }
        match self {
            TropScalar::Eps => TropScalar::Eps,
            TropScalar::Fin(a) => TropScalar::Fin(a * BigRational::from_integer(BigInt::from(k))),
        }
    }

    /// Tropical inverse `a^(−1) = −a`; ε has none.
    pub fn inverse(&self) -> Option<Self> {
        self.finite().map(|a| TropScalar::Fin(-a))
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> Option<BigInt> {
        self.finite().map(|a| a.floor().to_integer())
    }

    pub fn is_integer(&self) -> bool {
        self.finite().is_some_and(|a| a.is_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            TropScalar::Eps => f64::NEG_INFINITY,
            TropScalar::Fin(a) => a.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl serde::Serialize for TropScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<BigRational> for TropScalar {
    fn from(v: BigRational) -> Self {
        TropScalar::Fin(v)
    }
}

impl From<i64> for TropScalar {
    fn from(v: i64) -> Self {
        TropScalar::int(v)
    }
}

pub fn oplus(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.oplus(b)
}

pub fn otimes(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.otimes(b)
}

pub fn oplus_prime(a: &TropScalar, b: &TropScalar) -> TropScalar {
    a.oplus_prime(b)
}

/// `n! = 1 ⊗ 2 ⊗ … ⊗ n = n(n+1)/2`, with `0! = 0`.
pub fn trop_factorial(n: u64) -> TropScalar {
    let n = BigInt::from(n);
    let f = &n * (&n + 1u32) / 2u32;
    TropScalar::Fin(BigRational::from_integer(f))
}

/// Scalar exponential `0 ⊕ a/1! ⊕ a^(2)/2! ⊕ …`.
///
/// Closed form: `0` when `a ≤ 1`, otherwise `⌊a⌋·a − ⌊a⌋!`.
pub fn scalar_exp(a: &TropScalar) -> TropScalar {
    let Some(v) = a.finite() else {
        return TropScalar::zero();
    };
    if *v <= BigRational::one() {
        return TropScalar::zero();
    }
    let f = v.floor();
    let fi = f.to_integer();
    let fact = &fi * (&fi + 1u32) / 2u32;
    TropScalar::Fin(&f * v - BigRational::from_integer(fact))
}

/// Scalar logarithm `min_{n ≥ 1} (y + n!) / n` for finite `y > 0`.
///
/// `(y + n(n+1)/2)/n = y/n + (n+1)/2` is convex in `n`, so the scan stops at
/// the first strict increase.
pub fn scalar_log(y: &TropScalar) -> Result<TropScalar> {
    let v = match y.finite() {
        Some(v) if v.is_positive() => v,
        _ => return Err(Error::LogDomain(y.clone())),
    };
    let term = |n: u64| -> BigRational {
        let nn = BigInt::from(n);
        let fact = BigRational::from_integer(&nn * (&nn + 1u32) / 2u32);
        (v + fact) / BigRational::from_integer(nn)
    };
    let mut best = term(1);
    let mut n = 2u64;
    loop {
        let next = term(n);
        if next > best {
            break;
        }
        best = next;
        n += 1;
    }
    Ok(TropScalar::Fin(best))
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::Eps => f.pad("-inf"),
            TropScalar::Fin(v) => f.pad(&v.to_string()),
        }
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if body.contains('.') && (frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit())) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(digits, scale);
    Some(if neg { -value } else { value })
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let n: BigInt = {
        let digits = n.strip_prefix(['-', '+']).unwrap_or(n);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        n.parse().ok()?
    };
    if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for TropScalar {
    type Err = ParseError;

    /// Accepts `-inf` / `.` for ε, decimals (`3`, `-2.5`) and rationals (`7/2`).
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s == "-inf" || s == "." {
            return Ok(TropScalar::Eps);
        }
        let parsed = if s.contains('/') {
            parse_rational(s)
        } else {
            parse_decimal(s)
        };
        parsed
            .map(TropScalar::Fin)
            .ok_or_else(|| ParseError::Scalar { text: s.to_string() })
    }
}
