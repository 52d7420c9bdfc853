//! Canonical polyadic fitting by alternating least squares.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rank2::{Matrix, RankOneTermList};
use crate::scalar::Scalar;
use crate::tensor::DenseTensor;

/// Fields the least-squares sweeps run in.
pub trait AlsField: Scalar + Copy {
    /// Uniform on `[-1, 1]`, independently per real component.
    fn sample(rng: &mut ChaCha8Rng) -> Self;

    fn real(x: f64) -> Self;
}

impl AlsField for f64 {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        rng.gen_range(-1.0..=1.0)
    }

    fn real(x: f64) -> Self {
        x
    }
}

impl AlsField for Complex64 {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }

    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlsConfig {
    /// Largest term count tried; defaults to `Π n_k / max n_k`.
    pub max_rank: Option<usize>,
    pub sweeps: usize,
    /// Max componentwise residual accepted as an exact fit.
    pub tol: f64,
    pub restarts: usize,
    /// Restart `i` uses seed `seed + i`.
    pub seed: u64,
}

impl Default for AlsConfig {
    fn default() -> Self {
        AlsConfig {
            max_rank: None,
            sweeps: 500,
            tol: 1e-8,
            restarts: 20,
            seed: 1,
        }
    }
}

/// Factor matrices of a fit, one `rank × n_k` matrix per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CpFactors<S> {
    pub factors: Vec<Matrix<S>>,
    pub residual: f64,
    pub sweeps: usize,
}

impl<S: Scalar> CpFactors<S> {
    pub fn rank(&self) -> usize {
        self.factors.first().map_or(0, Matrix::rows)
    }

    pub fn terms(&self) -> RankOneTermList<S> {
        let terms = (0..self.rank())
            .map(|l| {
                self.factors
                    .iter()
                    .map(|f| DenseTensor::vector(f.row(l).to_vec()).expect("non-empty row"))
                    .collect()
            })
            .collect();
        RankOneTermList { terms }
    }
}

/// Gaussian elimination with partial pivoting; `None` on a zero pivot.
fn solve<S: AlsField>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].modulus().total_cmp(&a[j][col].modulus()))?;
        if a[p][col].modulus() == 0.0 || !a[p][col].modulus().is_finite() {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot = &top[col];
        for (i, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot[col];
            for (x, &p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = *x - f * p;
            }
            b[col + 1 + i] = b[col + 1 + i] - f * b[col];
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s = s - a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

fn residual<S: AlsField>(target: &DenseTensor<S>, factors: &[Matrix<S>]) -> f64 {
    let rank = factors[0].rows();
    let shape = target.shape();
    let mut worst = 0.0f64;
    for (flat, t) in target.coeffs().iter().enumerate() {
        let idx = shape.unravel(flat);
        let mut sum = S::zero();
        for l in 0..rank {
            let mut prod = S::one();
            for (f, &i) in factors.iter().zip(&idx) {
                prod = prod * f[(l, i)];
            }
            sum = sum + prod;
        }
        worst = worst.max((*t - sum).modulus());
    }
    worst
}

/// Fits `target ≈ Σ_l F_1[l,·] ⊗ … ⊗ F_m[l,·]` from a seeded random start.
///
/// Each sweep solves the normal equations of every mode in turn, with a
/// ridge of `1e-12 · max(1, max diag)`. Stops once the max componentwise
/// residual is at most `config.tol` or after `config.sweeps` sweeps.
/// Returns `None` if a solve breaks down.
pub fn cp_als<S: AlsField>(
    target: &DenseTensor<S>,
    rank: usize,
    config: &AlsConfig,
    seed: u64,
) -> Option<CpFactors<S>> {
    let dims = target.dims().to_vec();
    let order = dims.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<Matrix<S>> = dims
        .iter()
        .map(|&n| {
            let mut f = Matrix::zeros(rank, n);
            for l in 0..rank {
                for i in 0..n {
                    f[(l, i)] = S::sample(&mut rng);
                }
            }
            f
        })
        .collect();
    let shape = target.shape().clone();

    let mut res = residual(target, &factors);
    let mut sweeps = 0;
    while sweeps < config.sweeps && res > config.tol {
        for k in 0..order {
            let mut gram = vec![vec![S::one(); rank]; rank];
            for (j, f) in factors.iter().enumerate() {
                if j == k {
                    continue;
                }
                for (l, row) in gram.iter_mut().enumerate() {
                    for (m, g) in row.iter_mut().enumerate() {
                        let mut dot = S::zero();
                        for i in 0..f.cols() {
                            dot = dot + f[(l, i)].conj() * f[(m, i)];
                        }
                        *g = *g * dot;
                    }
                }
            }
            let diag = (0..rank).map(|l| gram[l][l].modulus()).fold(1.0, f64::max);
            for (l, row) in gram.iter_mut().enumerate() {
                row[l] = row[l] + S::real(1e-12 * diag);
            }

            let mut rhs = vec![vec![S::zero(); rank]; dims[k]];
            for (flat, &t) in target.coeffs().iter().enumerate() {
                if t.modulus() == 0.0 {
                    continue;
                }
                let idx = shape.unravel(flat);
                for (l, r) in rhs[idx[k]].iter_mut().enumerate() {
                    let mut prod = t;
                    for (j, f) in factors.iter().enumerate() {
                        if j != k {
                            prod = prod * f[(l, idx[j])].conj();
                        }
                    }
                    *r = *r + prod;
                }
            }

            for (i, b) in rhs.into_iter().enumerate() {
                let x = solve(gram.clone(), b)?;
                for (l, v) in x.into_iter().enumerate() {
                    factors[k][(l, i)] = v;
                }
            }
        }
        sweeps += 1;
        res = residual(target, &factors);
        if !res.is_finite() {
            return None;
        }
    }
    Some(CpFactors {
        factors,
        residual: res,
        sweeps,
    })
}
