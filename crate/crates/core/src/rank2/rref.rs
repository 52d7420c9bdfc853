use num::Zero;

use crate::rank2::Matrix;
use crate::scalar::Rational;

/// Reduced row echelon form in exact arithmetic.
///
/// The pivot in each column is the first non-zero entry at or below the
/// current row; no magnitude pivoting is done since the arithmetic is exact.
/// Returns the reduced matrix and the 0-based pivot columns in order.
pub fn rref(m: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
    let mut r = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r.cols() {
        if row == r.rows() {
            break;
        }
        let Some(p) = (row..r.rows()).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        let inv = r[(row, col)].recip();
        for j in col..r.cols() {
            r[(row, j)] = &r[(row, j)] * &inv;
        }
        for i in 0..r.rows() {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let factor = r[(i, col)].clone();
            for j in col..r.cols() {
                let delta = &factor * &r[(row, j)];
                r[(i, j)] = &r[(i, j)] - &delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

/// Rank of a rational matrix, the number of RREF pivots.
pub fn rank(m: &Matrix<Rational>) -> usize {
    rref(m).1.len()
}
