//! Tensor-product expressions over named basis symbols.
//!
//! An expression such as `a1@b1 + 2 a1@(b2 - b3)` is a sum of terms, each a
//! coefficient times a tensor product of slot vectors; a slot vector is a
//! formal linear combination of symbols. Every term has the same number of
//! slots (the order), and a symbol belongs to exactly one slot position.
//!
//! Factoring rewrites an expression with fewer terms. Over two slots the
//! minimum is the matrix rank of the coefficient array ([`factor_exact_order2`]);
//! for three or more slots only heuristic upper bounds are available
//! ([`factor_heuristic_higher_order`]).

mod als;
mod factor;
mod parse;

pub use als::{cp_als, AlsConfig, AlsField, CpFactors};
pub use factor::{
    factor_exact_order2, factor_exact_order2_svd, factor_greedy, factor_heuristic_higher_order,
    from_factor_matrices, GroupDirection, HeuristicOutcome, HeuristicStatus,
};
pub use parse::parse;

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{FieldKind, Rational, Scalar};
use crate::tensor::{DenseTensor, Shape};

/// Formal linear combination `Σ c_k · symbol_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotVector<S> {
    pub entries: Vec<(String, S)>,
}

impl<S: Scalar> SlotVector<S> {
    pub fn symbol(name: &str) -> Self {
        SlotVector {
            entries: vec![(name.to_string(), S::one())],
        }
    }

    /// Merges repeated symbols, drops negligible coefficients and sorts by
    /// natural symbol order.
    pub fn normalized(&self) -> Self {
        let mut entries: Vec<(String, S)> = Vec::new();
        for (sym, c) in &self.entries {
            match entries.iter_mut().find(|(s, _)| s == sym) {
                Some((_, acc)) => *acc = acc.clone() + c.clone(),
                None => entries.push((sym.clone(), c.clone())),
            }
        }
        entries.retain(|(_, c)| !c.is_negligible());
        entries.sort_by(|a, b| natural_cmp(&a.0, &b.0));
        SlotVector { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().entries.is_empty()
    }

    /// Equality of the normalized forms under [`Scalar::approx_eq`].
    pub fn same_vector(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.entries.len() == b.entries.len()
            && a.entries
                .iter()
                .zip(&b.entries)
                .all(|((sa, ca), (sb, cb))| sa == sb && ca.approx_eq(cb))
    }

    pub fn scaled(&self, lambda: &S) -> Self {
        SlotVector {
            entries: self
                .entries
                .iter()
                .map(|(s, c)| (s.clone(), lambda.clone() * c.clone()))
                .collect(),
        }
    }

    /// Coordinates in `basis`; every symbol must occur in it.
    fn coordinates(&self, basis: &[String]) -> Result<Vec<S>> {
        let mut coords = vec![S::zero(); basis.len()];
        for (sym, c) in &self.entries {
            let i = basis
                .iter()
                .position(|b| b == sym)
                .ok_or_else(|| Error::Invalid(format!("symbol `{sym}` missing from basis")))?;
            coords[i] = coords[i].clone() + c.clone();
        }
        Ok(coords)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term<S> {
    pub coeff: S,
    pub slots: Vec<SlotVector<S>>,
}

impl<S: Scalar> Term<S> {
    /// Moves the coefficient of every single-symbol slot into the term
    /// coefficient, so `a1@(3 b1)` becomes `3 a1@b1`.
    pub fn tidy(mut self) -> Self {
        for slot in &mut self.slots {
            if let [(_, c)] = slot.entries.as_mut_slice() {
                if !c.is_zero() && !c.is_one() {
                    self.coeff = self.coeff.clone() * c.clone();
                    *c = S::one();
                }
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorExpr<S> {
    pub terms: Vec<Term<S>>,
}

/// Per-slot ordered lists of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotBasis {
    pub slots: Vec<Vec<String>>,
}

impl SlotBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    /// Each slot's symbols in natural order.
    pub fn sorted(&self) -> SlotBasis {
        let mut slots = self.slots.clone();
        for s in &mut slots {
            s.sort_by(|a, b| natural_cmp(a, b));
        }
        SlotBasis { slots }
    }
}

impl<S: Scalar> TensorExpr<S> {
    pub fn new(terms: Vec<Term<S>>) -> Result<Self> {
        let e = TensorExpr { terms };
        e.validate()?;
        Ok(e)
    }

    pub fn zero() -> Self {
        TensorExpr { terms: Vec::new() }
    }

    /// Slot count, `None` for the empty sum.
    pub fn order(&self) -> Option<usize> {
        self.terms.first().map(|t| t.slots.len())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks uniform order and that no symbol appears in two slot positions.
    pub fn validate(&self) -> Result<()> {
        let Some(order) = self.order() else {
            return Ok(());
        };
        let mut seen: Vec<(&str, usize)> = Vec::new();
        for (i, term) in self.terms.iter().enumerate() {
            if term.slots.len() != order {
                return Err(Error::MixedOrder {
                    term: i,
                    expected: order,
                    found: term.slots.len(),
                });
            }
            for (k, slot) in term.slots.iter().enumerate() {
                if slot.entries.is_empty() {
                    return Err(Error::Invalid(format!("term {i} has an empty slot")));
                }
                for (sym, _) in &slot.entries {
                    match seen.iter().find(|(s, _)| s == sym) {
                        Some(&(_, first)) if first != k => {
                            return Err(Error::SymbolReuse {
                                symbol: sym.clone(),
                                first: first + 1,
                                second: k + 1,
                            })
                        }
                        Some(_) => {}
                        None => seen.push((sym, k)),
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-slot symbols in order of first appearance.
    pub fn slot_basis(&self) -> Result<SlotBasis> {
        let order = self.order().ok_or(Error::EmptyExpression)?;
        let mut slots: Vec<Vec<String>> = vec![Vec::new(); order];
        for term in &self.terms {
            for (k, slot) in term.slots.iter().enumerate() {
                for (sym, _) in &slot.entries {
                    if !slots[k].contains(sym) {
                        slots[k].push(sym.clone());
                    }
                }
            }
        }
        Ok(SlotBasis { slots })
    }

    /// Coefficient tensor `X^{i1…im}` over the first-appearance basis.
    pub fn to_coefficient_tensor(&self) -> Result<(DenseTensor<S>, SlotBasis)> {
        let basis = self.slot_basis()?;
        let t = self.coefficients_in(&basis)?;
        Ok((t, basis))
    }

    /// Coefficient tensor over a caller-chosen basis.
    pub fn coefficients_in(&self, basis: &SlotBasis) -> Result<DenseTensor<S>> {
        self.validate()?;
        let mut acc = DenseTensor::zeros(Shape::new(basis.dims())?);
        for term in &self.terms {
            if term.slots.len() != basis.slots.len() {
                return Err(Error::WrongOrder {
                    expected: basis.slots.len(),
                    found: term.slots.len(),
                });
            }
            let factors = term
                .slots
                .iter()
                .zip(&basis.slots)
                .map(|(slot, b)| slot.coordinates(b).and_then(DenseTensor::vector))
                .collect::<Result<Vec<_>>>()?;
            let product = DenseTensor::multi_tensor_product(&factors)?;
            acc.add_assign(&product.scale(&term.coeff))?;
        }
        Ok(acc)
    }

    /// Sum of pure terms `X^{i…} a_{1,i1} ⊗ … ⊗ a_{m,im}` for the non-zero
    /// coefficients, in row-major order of `t`.
    pub fn from_coefficient_tensor(t: &DenseTensor<S>, basis: &SlotBasis) -> Result<Self> {
        if t.dims() != basis.dims().as_slice() {
            return Err(Error::ShapeMismatch {
                expected: basis.dims(),
                found: t.dims().to_vec(),
            });
        }
        let terms = t
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(flat, c)| {
                let index = t.shape().unravel(flat);
                Term {
                    coeff: c.clone(),
                    slots: index
                        .iter()
                        .zip(&basis.slots)
                        .map(|(&i, b)| SlotVector::symbol(&b[i]))
                        .collect(),
                }
            })
            .collect();
        Ok(TensorExpr { terms })
    }

    /// Fully distributed form with collected coefficients, zero terms
    /// dropped and terms ordered lexicographically by symbol position, each
    /// slot's symbols taken in natural order.
    pub fn expand(&self) -> Result<Self> {
        if self.is_empty() {
            return Ok(TensorExpr::zero());
        }
        let basis = self.slot_basis()?.sorted();
        let t = self.coefficients_in(&basis)?;
        TensorExpr::from_coefficient_tensor(&t, &basis)
    }

    pub fn map_field<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> TensorExpr<T> {
        TensorExpr {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f(&t.coeff),
                    slots: t
                        .slots
                        .iter()
                        .map(|s| SlotVector {
                            entries: s.entries.iter().map(|(n, c)| (n.clone(), f(c))).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                let slots: Vec<Value> = t
                    .slots
                    .iter()
                    .map(|s| {
                        Value::Array(
                            s.entries
                                .iter()
                                .map(|(sym, c)| json!({"symbol": sym, "coeff": c.to_json()}))
                                .collect(),
                        )
                    })
                    .collect();
                json!({"coeff": t.coeff.to_json(), "slots": slots})
            })
            .collect();
        json!({"field": S::KIND.as_str(), "order": self.order(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = v
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("expression JSON needs a \"field\"".into()))?;
        let kind: FieldKind = field.parse()?;
        if kind != S::KIND {
            return Err(Error::FieldMismatch {
                left: S::KIND,
                right: kind,
            });
        }
        let bad = |what: &str| Error::Invalid(format!("malformed expression JSON: {what}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"terms\""))?
            .iter()
            .map(|t| {
                let coeff = S::from_json(t.get("coeff").ok_or_else(|| bad("term without coeff"))?)?;
                let slots = t
                    .get("slots")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("term without slots"))?
                    .iter()
                    .map(|s| {
                        let entries = s
                            .as_array()
                            .ok_or_else(|| bad("slot is not an array"))?
                            .iter()
                            .map(|e| {
                                let sym = e
                                    .get("symbol")
                                    .and_then(Value::as_str)
                                    .ok_or_else(|| bad("entry without symbol"))?;
                                let c = S::from_json(
                                    e.get("coeff").ok_or_else(|| bad("entry without coeff"))?,
                                )?;
                                Ok((sym.to_string(), c))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(SlotVector { entries })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term { coeff, slots })
            })
            .collect::<Result<Vec<_>>>()?;
        TensorExpr::new(terms)
    }
}

impl TensorExpr<Rational> {
    /// Exact conversion of a real-field expression.
    pub fn from_real(e: &TensorExpr<f64>) -> Result<Self> {
        let finite = e.terms.iter().all(|t| {
            t.coeff.is_finite()
                && t.slots
                    .iter()
                    .flat_map(|s| &s.entries)
                    .all(|(_, c)| c.is_finite())
        });
        if !finite {
            return Err(Error::Invalid("non-finite coefficient".into()));
        }
        Ok(e.map_field(|x| crate::scalar::rational_from_f64(*x).expect("finite")))
    }
}

/// Orders identifiers treating digit runs as numbers, so `a2 < a10` and `x < x^2`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x.0, y.0) {
            (true, true) => {
                let (tx, ty) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                tx.len().cmp(&ty.len()).then(tx.cmp(ty))
            }
            _ => x.1.cmp(y.1),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then(a.cmp(b))
}

fn write_coeff<S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    c: &S,
    first: bool,
    trailing_space: bool,
) -> fmt::Result {
    let negative = c.is_negative();
    let magnitude = match (S::KIND, negative) {
        (FieldKind::Complex, _) => format!("({c})"),
        (_, true) => (-c.clone()).to_string(),
        (_, false) => c.to_string(),
    };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let unit = if negative {
        (-c.clone()).is_one()
    } else {
        c.is_one()
    };
    if !unit {
        f.write_str(&magnitude)?;
        if trailing_space {
            f.write_str(" ")?;
        }
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for SlotVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [(sym, c)] = self.entries.as_slice() {
            if c.is_one() {
                return f.write_str(sym);
            }
        }
        f.write_str("(")?;
        for (i, (sym, c)) in self.entries.iter().enumerate() {
            write_coeff(f, c, i == 0, true)?;
            f.write_str(sym)?;
        }
        f.write_str(")")
    }
}

impl<S: Scalar> fmt::Display for TensorExpr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            write_coeff(f, &term.coeff, i == 0, true)?;
            for (k, slot) in term.slots.iter().enumerate() {
                if k > 0 {
                    f.write_str("@")?;
                }
                write!(f, "{slot}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn coeff_rows(e: &str) -> Vec<Vec<Rational>> {
        parse(e)
            .unwrap()
            .to_coefficient_tensor()
            .unwrap()
            .0
            .rows()
            .unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn coefficient_tensors() {
        assert_eq!(
            coeff_rows("-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2"),
            ints(&[&[-1, 3], &[2, -4], &[0, 1]])
        );
        assert_eq!(
            coeff_rows("a1@b1 + a1@b2 + a2@b1 + a2@b2"),
            ints(&[&[1, 1], &[1, 1]])
        );
        assert_eq!(coeff_rows("a1@b1 - a1@b1"), ints(&[&[0]]));
    }

    #[test]
    fn expansion() {
        let e = parse("(a1+a2)@(b1+b2)").unwrap().expand().unwrap();
        assert_eq!(e.to_string(), "a1@b1 + a1@b2 + a2@b1 + a2@b2");
        assert_eq!(e.expand().unwrap(), e);
        let z = parse("2 a1@(b1 - b1)").unwrap().expand().unwrap();
        assert!(z.is_empty());
        assert_eq!(z.to_string(), "0");
        assert_eq!(
            TensorExpr::<Rational>::zero().expand().unwrap(),
            TensorExpr::zero()
        );
    }

    #[test]
    fn expansion_order_is_natural() {
        let e = parse("a10@b + a2@b + 1/2 a1@b").unwrap().expand().unwrap();
        assert_eq!(e.to_string(), "1/2 a1@b + a2@b + a10@b");
    }

    #[test]
    fn rendering() {
        let e = parse("-x@y + 2 x^2@(y - 1/2 y^2)").unwrap();
        assert_eq!(e.to_string(), "-x@y + 2 x^2@(y - 1/2 y^2)");
        let t = Term {
            coeff: int(1),
            slots: vec![
                SlotVector {
                    entries: vec![("a".into(), int(3))],
                },
                SlotVector {
                    entries: vec![("b".into(), int(-1))],
                },
            ],
        }
        .tidy();
        assert_eq!(TensorExpr { terms: vec![t] }.to_string(), "-3 a@b");
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("a2", "a10"), Ordering::Less);
        assert_eq!(natural_cmp("x", "x^2"), Ordering::Less);
        assert_eq!(natural_cmp("x^2", "x^3"), Ordering::Less);
        assert_eq!(natural_cmp("b", "a9"), Ordering::Greater);
        assert_eq!(natural_cmp("a01", "a1"), Ordering::Less);
    }

    #[test]
    fn json_round_trip() {
        let e = parse("3 a1@(b1 - 1/2 b2) - a2@b2").unwrap();
        let back = TensorExpr::<Rational>::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
        assert!(TensorExpr::<f64>::from_json(&e.to_json()).is_err());
    }

    #[test]
    fn validation() {
        let sym = |s: &str| SlotVector::<Rational>::symbol(s);
        let reuse = TensorExpr::new(vec![Term {
            coeff: int(1),
            slots: vec![sym("a"), sym("a")],
        }]);
        assert!(matches!(reuse, Err(Error::SymbolReuse { .. })));
        assert!(TensorExpr::<Rational>::zero()
            .to_coefficient_tensor()
            .is_err());
    }
}
