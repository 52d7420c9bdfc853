//! Scalar fields the tensor kernels are generic over.
//!
//! Three fields are supported: exact rationals, 64-bit reals and complex
//! numbers built from two 64-bit reals. A computation picks one field and
//! stays in it; nothing promotes implicitly between fields.

use std::fmt::{self, Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Num, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Absolute part of the float comparison tolerance.
pub const FLOAT_ABS_TOL: f64 = 1e-9;
/// Relative part of the float comparison tolerance.
pub const FLOAT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Real,
    Complex,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Rational => "rational",
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        }
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(FieldKind::Rational),
            "real" => Ok(FieldKind::Real),
            "complex" => Ok(FieldKind::Complex),
            other => Err(Error::Invalid(format!("unknown field `{other}`"))),
        }
    }
}

/// A field element usable in every tensor kernel.
///
/// Equality through [`Scalar::approx_eq`] is exact for rationals and
/// tolerance-based for the float fields.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const KIND: FieldKind;

    fn from_rational(r: &Rational) -> Self;

    fn approx_eq(&self, other: &Self) -> bool;

    fn is_negligible(&self) -> bool {
        self.approx_eq(&Self::zero())
    }

    /// Absolute value (modulus for complex numbers) as a float.
    fn modulus(&self) -> f64;

    fn conj(&self) -> Self;

    /// Strictly below zero; always false for unordered fields.
    fn is_negative(&self) -> bool {
        false
    }

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

fn float_close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= FLOAT_ABS_TOL + FLOAT_REL_TOL * scale
}

impl Scalar for Rational {
    const KIND: FieldKind = FieldKind::Rational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Rational::from_integer(BigInt::from(i))),
                None => Err(Error::Invalid(format!(
                    "rational coefficient must be a \"p/q\" string or an integer, got {n}"
                ))),
            },
            other => Err(Error::Invalid(format!("expected a rational, got {other}"))),
        }
    }
}

impl Scalar for f64 {
    const KIND: FieldKind = FieldKind::Real;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        float_close(*self, *other, self.abs().max(other.abs()))
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }

    fn conj(&self) -> Self {
        *self
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::Invalid(format!("expected a real number, got {v}")))
    }
}

impl Scalar for Complex64 {
    const KIND: FieldKind = FieldKind::Complex;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(f64::from_rational(r), 0.0)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let diff = (self - other).norm();
        diff <= FLOAT_ABS_TOL + FLOAT_REL_TOL * self.norm().max(other.norm())
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_json(&self) -> Value {
        Value::Array(vec![self.re.to_json(), self.im.to_json()])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(Complex64::new(f64::from_json(re)?, f64::from_json(im)?)),
            _ => Err(Error::Invalid(format!(
                "expected a complex number as [re, im], got {v}"
            ))),
        }
    }
}

/// Parses `p`, `p/q` or a plain decimal such as `-0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut numer =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
