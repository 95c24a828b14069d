use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Comparison policy for the `f64` backend.
///
/// Two values are equal when `|a - b| <= max(abs, rel * max(|a|, |b|))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    /// Pure absolute tolerance, used for block-constancy tests on
    /// integrated states.
    pub fn absolute(abs: f64) -> Self {
        Tolerance { rel: 0.0, abs }
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs.max(self.rel * a.abs().max(b.abs()))
    }

    /// Pivot threshold for rank decisions on a `rows x cols` matrix whose
    /// largest entry has magnitude `max_abs`.
    pub fn rank_threshold(&self, rows: usize, cols: usize, max_abs: f64) -> f64 {
        (rows.max(cols) as f64 * self.rel * max_abs).max(self.abs)
    }
}

/// Field elements the linear algebra runs over.
///
/// `Rational` gives exact decisions; `f64` compares through a [`Tolerance`].
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn magnitude(&self) -> f64;

    fn to_f64(&self) -> f64;

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool;

    /// Exact backends treat only zero as negligible.
    fn is_negligible(&self, threshold: f64) -> bool;

    fn parse_scalar(s: &str) -> Result<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }

    fn is_negligible(&self, _threshold: f64) -> bool {
        self.is_zero()
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        tol.close(*self, *other)
    }

    fn is_negligible(&self, threshold: f64) -> bool {
        self.abs() <= threshold
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains('/') {
            let q = parse_rational(t)?;
            return Ok(Scalar::to_f64(&q));
        }
        let v: f64 = t.parse().map_err(|_| Error::ParseScalar {
            input: s.to_string(),
            reason: "not a number",
        })?;
        if !v.is_finite() {
            return Err(Error::ParseScalar {
                input: s.to_string(),
                reason: "not finite",
            });
        }
        Ok(v)
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Parses `"3"`, `"-3/2"`, `"0.75"` or `"1.5e-3"` into an exact rational.
/// Decimals are taken as their exact decimal expansion.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |reason| Error::ParseScalar {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num = parse_decimal(n.trim()).ok_or_else(|| err("bad numerator"))?;
        let den = parse_decimal(d.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(num / den);
    }
    parse_decimal(t).ok_or_else(|| err("not an integer, fraction or decimal"))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = [int_part, frac_part].concat();
    let mut num: BigInt = all.parse().ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}
