//! Rank and rank decompositions of order-2 tensors.
//!
//! A rank decomposition of an `n × m` matrix `M` is a pair `D1` (r×n),
//! `D2` (r×m) with `M = D1ᵀ D2`; row `l` of `D1` and row `l` of `D2` are the
//! two factors of the `l`-th rank-one term. Two routes are provided:
//!
//! - [`rank_decompose_rref`]: exact, over the rationals. `D1ᵀ` is the pivot
//!   columns of `M` and `D2` the non-zero rows of its reduced row echelon form.
//! - [`rank_decompose_svd`]: floating point. With `M = U Σ Vᵀ` and `r`
//!   singular values above the rank threshold, `D1ᵀ = U'` and `D2 = Σ'V'ᵀ`.
//!
//! For order three and higher no exact rank algorithm is offered; only
//! [`verify_decomposition`] of a supplied decomposition.

mod display;
mod matrix;
mod rref;
mod svd;

pub use display::{render_decomposition, render_terms};
pub use matrix::Matrix;
pub use rref::{rank, rref};
pub use svd::{svd, Svd, SVD_MAX_SWEEPS, SVD_TOL};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tensor::DenseTensor;

/// Relative rank threshold: `σ_i` counts when `σ_i > EPS_RANK · σ_max · max(n, m)`.
pub const EPS_RANK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RankDecomposition<S> {
    pub rank: usize,
    /// `r × n`; row `l` is the left factor of term `l`.
    pub d1: Matrix<S>,
    /// `r × m`; row `l` is the right factor of term `l`.
    pub d2: Matrix<S>,
}

impl<S: Scalar> RankDecomposition<S> {
    /// `D1ᵀ D2`.
    pub fn reconstruct(&self) -> Matrix<S> {
        self.d1
            .transpose()
            .matmul(&self.d2)
            .expect("factor row counts agree by construction")
    }

    pub fn terms(&self) -> RankOneTermList<S> {
        let terms = (0..self.rank)
            .map(|l| {
                vec![
                    DenseTensor::vector(self.d1.row(l).to_vec()).expect("non-empty row"),
                    DenseTensor::vector(self.d2.row(l).to_vec()).expect("non-empty row"),
                ]
            })
            .collect();
        RankOneTermList { terms }
    }
}

/// A sum of pure tensor products `Σ_l v_{l,1} ⊗ … ⊗ v_{l,m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTermList<S> {
    pub terms: Vec<Vec<DenseTensor<S>>>,
}

impl<S: Scalar> RankOneTermList<S> {
    pub fn new(terms: Vec<Vec<DenseTensor<S>>>) -> Result<Self> {
        let order = terms.first().map_or(0, Vec::len);
        for (i, t) in terms.iter().enumerate() {
            if t.len() != order {
                return Err(Error::MixedOrder {
                    term: i,
                    expected: order,
                    found: t.len(),
                });
            }
            if let Some(bad) = t.iter().find(|v| v.order() != 1) {
                return Err(Error::WrongOrder {
                    expected: 1,
                    found: bad.order(),
                });
            }
        }
        Ok(RankOneTermList { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sums the terms into a tensor of the given shape.
    pub fn expand(&self, dims: &[usize]) -> Result<DenseTensor<S>> {
        let shape = crate::tensor::Shape::new(dims.to_vec())?;
        let mut acc = DenseTensor::zeros(shape);
        for term in &self.terms {
            let found: Vec<usize> = term.iter().map(|v| v.dims()[0]).collect();
            if found != dims {
                return Err(Error::ShapeMismatch {
                    expected: dims.to_vec(),
                    found,
                });
            }
            acc.add_assign(&DenseTensor::multi_tensor_product(term)?)?;
        }
        Ok(acc)
    }
}

/// Outcome of re-expanding a decomposition against its target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub holds: bool,
    /// Largest componentwise modulus of `target - Σ terms`.
    pub residual: f64,
}

/// Checks `target == Σ_l v_{l,1} ⊗ … ⊗ v_{l,m}`: exactly for rationals,
/// within the float tolerance otherwise.
pub fn verify_decomposition<S: Scalar>(
    target: &DenseTensor<S>,
    terms: &RankOneTermList<S>,
) -> Result<Verification> {
    let sum = terms.expand(target.dims())?;
    Ok(Verification {
        holds: sum.approx_eq(target),
        residual: sum.max_abs_diff(target)?,
    })
}

pub fn rank_decompose_rref(m: &Matrix<Rational>) -> RankDecomposition<Rational> {
    let (r, pivots) = rref(m);
    let rank = pivots.len();
    let mut d1 = Matrix::zeros(rank, m.rows());
    for (l, &col) in pivots.iter().enumerate() {
        for i in 0..m.rows() {
            d1[(l, i)] = m[(i, col)].clone();
        }
    }
    let mut d2 = Matrix::zeros(rank, m.cols());
    for l in 0..rank {
        for j in 0..m.cols() {
            d2[(l, j)] = r[(l, j)].clone();
        }
    }
    let dec = RankDecomposition { rank, d1, d2 };
    assert_eq!(
        &dec.reconstruct(),
        m,
        "RREF factorization failed to reconstruct"
    );
    dec
}

/// Numerical rank from singular values.
pub fn numerical_rank(sigma: &[f64], rows: usize, cols: usize) -> usize {
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    let threshold = EPS_RANK * sigma_max * rows.max(cols) as f64;
    sigma.iter().filter(|&&s| s > threshold).count()
}

pub fn rank_decompose_svd(m: &Matrix<f64>) -> Result<RankDecomposition<f64>> {
    let s = svd(m)?;
    let rank = numerical_rank(&s.sigma, m.rows(), m.cols());
    let mut d1 = Matrix::zeros(rank, m.rows());
    let mut d2 = Matrix::zeros(rank, m.cols());
    for l in 0..rank {
        for i in 0..m.rows() {
            d1[(l, i)] = s.u[(i, l)];
        }
        for j in 0..m.cols() {
            d2[(l, j)] = s.sigma[l] * s.vt[(l, j)];
        }
    }
    let dec = RankDecomposition { rank, d1, d2 };
    let scale = m
        .row_vecs()
        .iter()
        .flatten()
        .fold(1.0f64, |a, x| a.max(x.abs()));
    let residual = dec.reconstruct().max_abs_diff(m)?;
    if residual > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "SVD factorization residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn vecs(terms: &RankOneTermList<Rational>) -> Vec<Vec<Vec<Rational>>> {
        terms
            .terms
            .iter()
            .map(|t| t.iter().map(|v| v.coeffs().to_vec()).collect())
            .collect()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn golden_rref_decompositions() {
        let a = rank_decompose_rref(&rm(&[&[3, 4], &[6, 8]]));
        assert_eq!(a.rank, 1);
        assert_eq!(
            vecs(&a.terms()),
            vec![vec![ints(&[3, 6]), vec![int(1), rational(4, 3)]]]
        );

        let b = rank_decompose_rref(&rm(&[&[1, 0], &[1, 1]]));
        assert_eq!(
            vecs(&b.terms()),
            vec![
                vec![ints(&[1, 1]), ints(&[1, 0])],
                vec![ints(&[0, 1]), ints(&[0, 1])]
            ]
        );

        let m = rank_decompose_rref(&rm(&[&[3, 4, 2], &[1, 2, 1], &[0, -2, -1]]));
        assert_eq!(
            vecs(&m.terms()),
            vec![
                vec![ints(&[3, 1, 0]), ints(&[1, 0, 0])],
                vec![ints(&[4, 2, -2]), vec![int(0), int(1), rational(1, 2)]],
            ]
        );
    }

    #[test]
    fn svd_route() {
        let a = Matrix::from_rows(vec![vec![3.0, 4.0], vec![6.0, 8.0]]).unwrap();
        let dec = rank_decompose_svd(&a).unwrap();
        assert_eq!(dec.rank, 1);
        assert!(dec.reconstruct().max_abs_diff(&a).unwrap() < 1e-9);

        let z = rank_decompose_svd(&Matrix::zeros(2, 3)).unwrap();
        assert_eq!(z.rank, 0);
        assert!(z.terms().is_empty());

        let b = Matrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(rank_decompose_svd(&b).unwrap().rank, 2);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let dec = rank_decompose_rref(&rm(&[&[0, 0], &[0, 0]]));
        assert_eq!(dec.rank, 0);
        assert_eq!(dec.reconstruct(), rm(&[&[0, 0], &[0, 0]]));
    }

    #[test]
    fn verification() {
        let target = rm(&[&[3, 4, 2], &[1, 2, 1], &[0, -2, -1]])
            .to_tensor()
            .unwrap();
        let v = |xs: &[i64]| DenseTensor::vector(ints(xs)).unwrap();
        // Valid but not minimal three-term decomposition.
        let three = RankOneTermList::new(vec![
            vec![v(&[4, 2, -1]), v(&[1, 0, 0])],
            vec![v(&[1, 1, -1]), v(&[-1, 2, 1])],
            vec![v(&[1, 0, 0]), v(&[0, 2, 1])],
        ])
        .unwrap();
        let ok = verify_decomposition(&target, &three).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.residual, 0.0);

        let wrong = RankOneTermList::new(vec![vec![v(&[1, 0, 1]), v(&[1, 0, 0])]]).unwrap();
        assert!(!verify_decomposition(&target, &wrong).unwrap().holds);

        let bad_shape = RankOneTermList::new(vec![vec![v(&[1, 0]), v(&[1, 0, 0])]]).unwrap();
        assert!(verify_decomposition(&target, &bad_shape).is_err());
        assert!(RankOneTermList::new(vec![vec![v(&[1])], vec![v(&[1]), v(&[1])]]).is_err());
    }
}
