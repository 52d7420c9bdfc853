//! Dense tensors over a pluggable scalar field.
//!
//! A tensor of order `m` and shape `(d1, …, dm)` is stored as its
//! coefficient array in the canonical basis `e_{i1} ⊗ … ⊗ e_{im}`, flattened
//! row-major (last index fastest). Order 0 is a scalar with a single
//! coefficient.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidShape(dims));
        }
        Ok(Shape(dims))
    }

    pub fn scalar() -> Self {
        Shape(Vec::new())
    }

    /// `(d, d, …, d)` with `n` copies.
    pub fn cube(d: usize, n: usize) -> Result<Self> {
        Shape::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Number of components, the product of the dims.
    pub fn numel(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &Shape) -> Shape {
        Shape(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Flat row-major offset of a 0-based multi-index.
    pub fn offset(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.0.len() || index.iter().zip(&self.0).any(|(&i, &d)| i >= d) {
            return Err(Error::IndexOutOfRange {
                index: index.to_vec(),
                shape: self.0.clone(),
            });
        }
        Ok(index
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&i, &d)| acc * d + i))
    }

    /// Inverse of [`Shape::offset`].
    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        let mut index = vec![0; self.0.len()];
        for (slot, &d) in index.iter_mut().zip(&self.0).rev() {
            *slot = offset % d;
            offset /= d;
        }
        index
    }
}

impl From<Shape> for Vec<usize> {
    fn from(s: Shape) -> Self {
        s.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<S> {
    shape: Shape,
    coeffs: Vec<S>,
}

impl<S: Scalar> DenseTensor<S> {
    pub fn new(shape: Shape, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != shape.numel() {
            return Err(Error::CoefficientCount {
                expected: shape.numel(),
                found: coeffs.len(),
                shape: shape.into(),
            });
        }
        Ok(DenseTensor { shape, coeffs })
    }

    pub fn zeros(shape: Shape) -> Self {
        let coeffs = vec![S::zero(); shape.numel()];
        DenseTensor { shape, coeffs }
    }

    pub fn scalar(value: S) -> Self {
        DenseTensor {
            shape: Shape::scalar(),
            coeffs: vec![value],
        }
    }

    /// Order-1 tensor.
    pub fn vector(values: Vec<S>) -> Result<Self> {
        DenseTensor::new(Shape::new(vec![values.len()])?, values)
    }

    /// Order-2 tensor from its rows.
    pub fn matrix(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::ShapeMismatch {
                expected: vec![m],
                found: vec![bad.len()],
            });
        }
        DenseTensor::new(
            Shape::new(vec![n, m])?,
            rows.into_iter().flatten().collect(),
        )
    }

    /// Canonical basis vector `e_i` of `R^d`, with `i` counted from 1.
    pub fn basis_vector(d: usize, i: usize) -> Result<Self> {
        if i == 0 || i > d {
            return Err(Error::IndexOutOfRange {
                index: vec![i],
                shape: vec![d],
            });
        }
        let mut coeffs = vec![S::zero(); d];
        coeffs[i - 1] = S::one();
        DenseTensor::vector(coeffs)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Component at a 0-based multi-index.
    pub fn get(&self, index: &[usize]) -> Result<&S> {
        Ok(&self.coeffs[self.shape.offset(index)?])
    }

    /// Component `T^{i1…im}` with indices counted from 1.
    pub fn component(&self, index: &[usize]) -> Result<&S> {
        let zero_based = one_based_to_zero(index, self.dims())?;
        self.get(&zero_based)
    }

    pub fn set(&mut self, index: &[usize], value: S) -> Result<()> {
        let at = self.shape.offset(index)?;
        self.coeffs[at] = value;
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.dims().to_vec(),
                found: other.dims().to_vec(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.clone() + b.clone();
        }
        Ok(())
    }

    pub fn scale(&self, lambda: &S) -> Self {
        self.map(|c| lambda.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DenseTensor<T> {
        DenseTensor {
            shape: self.shape.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        DenseTensor {
            shape: self.shape.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// `a ⊗ b`: shapes concatenate and `(a⊗b)[i…, j…] = a[i…]·b[j…]`.
    pub fn tensor_product(&self, other: &Self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for a in &self.coeffs {
            coeffs.extend(other.coeffs.iter().map(|b| a.clone() * b.clone()));
        }
        DenseTensor {
            shape: self.shape.concat(&other.shape),
            coeffs,
        }
    }

    /// Left fold of [`DenseTensor::tensor_product`] over a nonempty list.
    pub fn multi_tensor_product<'a, I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut it = factors.into_iter();
        let first = it.next().ok_or(Error::EmptyProduct)?.clone();
        Ok(it.fold(first, |acc, f| acc.tensor_product(f)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Componentwise equality under [`Scalar::approx_eq`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).modulus())
            .fold(0.0, f64::max))
    }

    /// Rows of an order-2 tensor.
    pub fn rows(&self) -> Result<Vec<Vec<S>>> {
        match *self.dims() {
            [_, m] => Ok(self.coeffs.chunks(m).map(<[S]>::to_vec).collect()),
            _ => Err(Error::WrongOrder {
                expected: 2,
                found: self.order(),
            }),
        }
    }
}

fn one_based_to_zero(index: &[usize], dims: &[usize]) -> Result<Vec<usize>> {
    index
        .iter()
        .map(|&i| {
            i.checked_sub(1).ok_or_else(|| Error::IndexOutOfRange {
                index: index.to_vec(),
                shape: dims.to_vec(),
            })
        })
        .collect()
}

impl<S: Scalar> fmt::Display for DenseTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn nest<S: Scalar>(
            f: &mut fmt::Formatter<'_>,
            dims: &[usize],
            coeffs: &[S],
        ) -> fmt::Result {
            match dims.split_first() {
                None => write!(f, "{}", coeffs[0]),
                Some((&d, rest)) => {
                    let stride: usize = rest.iter().product();
                    f.write_str("[")?;
                    for i in 0..d {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        nest(f, rest, &coeffs[i * stride..(i + 1) * stride])?;
                    }
                    f.write_str("]")
                }
            }
        }
        nest(f, self.dims(), &self.coeffs)
    }
}
