//! One-sided (Hestenes) Jacobi singular value decomposition.

use crate::error::{Error, Result};
use crate::rank2::Matrix;

/// Sweep cap for the Jacobi iteration.
pub const SVD_MAX_SWEEPS: usize = 10_000;
/// Convergence threshold on the normalized off-diagonal mass `|a_p·a_q| / (|a_p||a_q|)`.
pub const SVD_TOL: f64 = 1e-10;

/// `M = U Σ Vᵀ` with `U` (n×n) and `V` (m×m) orthogonal and `Σ` stored as
/// its `min(n, m)` diagonal entries in non-increasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix<f64>,
    pub sigma: Vec<f64>,
    pub vt: Matrix<f64>,
}

impl Svd {
    /// Rebuilds `U Σ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix<f64> {
        let (n, m) = (self.u.rows(), self.vt.rows());
        let mut out = Matrix::zeros(n, m);
        for (l, &s) in self.sigma.iter().enumerate() {
            for i in 0..n {
                let a = self.u[(i, l)] * s;
                for j in 0..m {
                    out[(i, j)] += a * self.vt[(l, j)];
                }
            }
        }
        out
    }
}

pub fn svd(m: &Matrix<f64>) -> Result<Svd> {
    if m.row_vecs().iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("matrix has non-finite entries".into()));
    }
    // Work on M / max|M| so squared norms cannot overflow.
    let scale = m
        .row_vecs()
        .iter()
        .flatten()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let unit = m.map(|x| x / scale);
    let mut out = if unit.rows() >= unit.cols() {
        tall_svd(&unit)?
    } else {
        let t = tall_svd(&unit.transpose())?;
        Svd {
            u: t.vt.transpose(),
            sigma: t.sigma,
            vt: t.u.transpose(),
        }
    };
    for s in &mut out.sigma {
        *s *= scale;
    }
    Ok(out)
}

fn tall_svd(m: &Matrix<f64>) -> Result<Svd> {
    let (n, k) = (m.rows(), m.cols());
    // Columns of `a` converge to U Σ; `v` accumulates the rotations.
    let mut a = m.transpose().row_vecs();
    let mut v = Matrix::<f64>::identity(k).row_vecs();

    let frob2: f64 = a.iter().flatten().map(|x| x * x).sum();
    // Columns below this squared norm are round-off and are not rotated.
    let tiny = (f64::EPSILON * n.max(k) as f64).powi(2) * frob2;
    let mut converged = k < 2;
    for _ in 0..SVD_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0f64;
        for p in 0..k {
            for q in p + 1..k {
                let alpha: f64 = a[p].iter().map(|x| x * x).sum();
                let beta: f64 = a[q].iter().map(|x| x * x).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum();
                if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
                    return Err(Error::Numerical("overflow in Jacobi SVD".into()));
                }
                if alpha <= tiny || beta <= tiny || gamma == 0.0 {
                    continue;
                }
                let ratio = gamma.abs() / (alpha * beta).sqrt();
                off = off.max(ratio);
                if ratio < f64::EPSILON {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        converged = off < SVD_TOL;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi SVD did not converge within {SVD_MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<f64> = a
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    if norms.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("overflow in Jacobi SVD".into()));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma_max = norms
        .get(order.first().copied().unwrap_or(0))
        .copied()
        .unwrap_or(0.0);
    let negligible = sigma_max * f64::EPSILON * n.max(k) as f64;

    let mut sigma = Vec::with_capacity(k);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut vt = Matrix::zeros(k, k);
    for (l, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > negligible && s > 0.0 {
            sigma.push(s);
            u_cols.push(a[j].iter().map(|x| x / s).collect());
        } else {
            sigma.push(0.0);
        }
        for (c, &x) in v[j].iter().enumerate() {
            vt[(l, c)] = x;
        }
    }
    complete_orthonormal(&mut u_cols, n);
    let mut u = Matrix::zeros(n, n);
    for (j, col) in u_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            u[(i, j)] = x;
        }
    }
    Ok(Svd { u, sigma, vt })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Extends orthonormal columns to a basis of `R^n` by Gram-Schmidt on the
/// standard basis, orthogonalizing twice.
fn complete_orthonormal(cols: &mut Vec<Vec<f64>>, n: usize) {
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut w = vec![0.0; n];
        w[e] = 1.0;
        for _ in 0..2 {
            for c in cols.iter() {
                let dot: f64 = c.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ci) in w.iter_mut().zip(c) {
                    *wi -= dot * ci;
                }
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orthogonality_defect(q: &Matrix<f64>) -> f64 {
        let qtq = q.transpose().matmul(q).unwrap();
        qtq.max_abs_diff(&Matrix::identity(q.cols())).unwrap()
    }

    fn check(m: &Matrix<f64>) -> Svd {
        let s = svd(m).unwrap();
        assert!(orthogonality_defect(&s.u) < 1e-10, "U not orthogonal");
        assert!(
            orthogonality_defect(&s.vt.transpose()) < 1e-10,
            "V not orthogonal"
        );
        assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.sigma.iter().all(|&x| x >= 0.0));
        assert!(s.reconstruct().max_abs_diff(m).unwrap() < 1e-10);
        s
    }

    #[test]
    fn diagonal_input() {
        let m = Matrix::from_rows(vec![vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = check(&m);
        assert_eq!(s.sigma, vec![3.0, 1.0]);
        for i in 0..2 {
            assert!((s.u[(i, i)].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_singular_values() {
        let m = Matrix::from_rows(vec![vec![3.0, 4.0], vec![6.0, 8.0]]).unwrap();
        let s = check(&m);
        assert!((s.sigma[0] - 125f64.sqrt()).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-12);
    }

    #[test]
    fn random_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, m) in [(4, 3), (3, 4), (1, 5), (5, 1), (6, 6)] {
            let rows = (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let s = check(&Matrix::from_rows(rows).unwrap());
            assert_eq!(s.sigma.len(), n.min(m));
        }
    }

    #[test]
    fn parallel_columns_converge() {
        let m = Matrix::from_rows(vec![
            vec![0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![1.0, -1.0, -1.0],
        ])
        .unwrap();
        let s = svd(&m).unwrap();
        assert!(s.reconstruct().max_abs_diff(&m).unwrap() < 1e-12);
        assert_eq!(s.sigma[2], 0.0);
        assert!(orthogonality_defect(&s.u) < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&Matrix::zeros(3, 2));
        assert_eq!(s.sigma, vec![0.0, 0.0]);
    }
}
