//! JSON encodings shared by the command-line tool.
//!
//! Coefficients follow [`Scalar::to_json`]: rationals as `"p/q"` strings,
//! reals as numbers, complex numbers as `[re, im]`. Every object carries a
//! `"field"` tag and decoding into a different field is an error.
//!
//! ```text
//! tensor      {"shape": [2, 2], "field": "rational", "coeffs": ["3", "4", "6", "8"]}
//! truncated   {"d": 2, "N": 2, "field": "real", "levels": [[1.0], [0.0, 1.0], [...]]}
//! signature   truncated plus "interval": [s, t]
//! term list   {"rank": 1, "field": "rational", "terms": [[["3", "6"], ["1", "4/3"]]]}
//! ```

use num::complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::TruncatedTensor;
use crate::error::{Error, Result};
use crate::rank2::RankOneTermList;
use crate::scalar::{FieldKind, Rational, Scalar};
use crate::signature::Signature;
use crate::tensor::{DenseTensor, Shape};

fn malformed(what: &str) -> Error {
    Error::Invalid(format!("malformed JSON: {what}"))
}

/// Reads the `"field"` tag.
pub fn field_of(v: &Value) -> Result<FieldKind> {
    v.get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("missing \"field\""))?
        .parse()
}

fn expect_field<S: Scalar>(v: &Value) -> Result<()> {
    let found = field_of(v)?;
    if found != S::KIND {
        return Err(Error::FieldMismatch {
            left: S::KIND,
            right: found,
        });
    }
    Ok(())
}

fn scalars<S: Scalar>(v: &Value, what: &str) -> Result<Vec<S>> {
    v.as_array()
        .ok_or_else(|| malformed(what))?
        .iter()
        .map(S::from_json)
        .collect()
}

fn usize_of(v: Option<&Value>, what: &str) -> Result<usize> {
    v.and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| malformed(what))
}

pub fn tensor_to_json<S: Scalar>(t: &DenseTensor<S>) -> Value {
    json!({
        "shape": t.dims(),
        "field": S::KIND.as_str(),
        "coeffs": t.coeffs().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn tensor_from_json<S: Scalar>(v: &Value) -> Result<DenseTensor<S>> {
    expect_field::<S>(v)?;
    let dims = v
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing \"shape\""))?
        .iter()
        .map(|d| usize_of(Some(d), "shape entries must be non-negative integers"))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = scalars(
        v.get("coeffs")
            .ok_or_else(|| malformed("missing \"coeffs\""))?,
        "coeffs",
    )?;
    DenseTensor::new(Shape::new(dims)?, coeffs)
}

pub fn truncated_to_json<S: Scalar>(t: &TruncatedTensor<S>) -> Value {
    let levels: Vec<Value> = t
        .levels()
        .iter()
        .map(|l| Value::Array(l.coeffs().iter().map(Scalar::to_json).collect()))
        .collect();
    json!({"d": t.d(), "N": t.depth(), "field": S::KIND.as_str(), "levels": levels})
}

pub fn truncated_from_json<S: Scalar>(v: &Value) -> Result<TruncatedTensor<S>> {
    expect_field::<S>(v)?;
    let d = usize_of(v.get("d"), "missing \"d\"")?;
    let depth = usize_of(v.get("N"), "missing \"N\"")?;
    let levels = v
        .get("levels")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing \"levels\""))?
        .iter()
        .map(|l| scalars(l, "levels must be arrays"))
        .collect::<Result<Vec<_>>>()?;
    if levels.len() != depth + 1 {
        return Err(malformed(&format!(
            "\"N\" is {depth} but {} levels given",
            levels.len()
        )));
    }
    TruncatedTensor::from_flat_levels(d, levels)
}

pub fn signature_to_json(sig: &Signature) -> Value {
    let mut v = truncated_to_json(&sig.value);
    v["interval"] = json!([sig.interval.0, sig.interval.1]);
    v
}

pub fn terms_to_json<S: Scalar>(terms: &RankOneTermList<S>) -> Value {
    let list: Vec<Value> = terms
        .terms
        .iter()
        .map(|t| {
            Value::Array(
                t.iter()
                    .map(|v| Value::Array(v.coeffs().iter().map(Scalar::to_json).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({"rank": terms.len(), "field": S::KIND.as_str(), "terms": list})
}

pub fn terms_from_json<S: Scalar>(v: &Value) -> Result<RankOneTermList<S>> {
    expect_field::<S>(v)?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing \"terms\""))?
        .iter()
        .map(|t| {
            t.as_array()
                .ok_or_else(|| malformed("each term must be an array of vectors"))?
                .iter()
                .map(|vec| DenseTensor::vector(scalars(vec, "vectors must be arrays")?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RankOneTermList::new(terms)
}

/// A dense tensor in whichever field its JSON names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Rational(DenseTensor<Rational>),
    Real(DenseTensor<f64>),
    Complex(DenseTensor<Complex64>),
}

impl AnyTensor {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match field_of(v)? {
            FieldKind::Rational => AnyTensor::Rational(tensor_from_json(v)?),
            FieldKind::Real => AnyTensor::Real(tensor_from_json(v)?),
            FieldKind::Complex => AnyTensor::Complex(tensor_from_json(v)?),
        })
    }

    pub fn field(&self) -> FieldKind {
        match self {
            AnyTensor::Rational(_) => FieldKind::Rational,
            AnyTensor::Real(_) => FieldKind::Real,
            AnyTensor::Complex(_) => FieldKind::Complex,
        }
    }
}

/// A truncated tensor in whichever field its JSON names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTruncated {
    Rational(TruncatedTensor<Rational>),
    Real(TruncatedTensor<f64>),
    Complex(TruncatedTensor<Complex64>),
}

impl AnyTruncated {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match field_of(v)? {
            FieldKind::Rational => AnyTruncated::Rational(truncated_from_json(v)?),
            FieldKind::Real => AnyTruncated::Real(truncated_from_json(v)?),
            FieldKind::Complex => AnyTruncated::Complex(truncated_from_json(v)?),
        })
    }

    pub fn field(&self) -> FieldKind {
        match self {
            AnyTruncated::Rational(_) => FieldKind::Rational,
            AnyTruncated::Real(_) => FieldKind::Real,
            AnyTruncated::Complex(_) => FieldKind::Complex,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyTruncated::Rational(t) => truncated_to_json(t),
            AnyTruncated::Real(t) => truncated_to_json(t),
            AnyTruncated::Complex(t) => truncated_to_json(t),
        }
    }
}
