//! Truncated signatures of piecewise-linear paths.
//!
//! A path is given by `K` sample points in `R^d`, parameterized uniformly
//! on `[0, 1]` (point `k` sits at time `k/(K-1)`). The signature over
//! `[s, t]` is the sequence of iterated integrals
//! `(1, ∫dx, ∫∫dx⊗dx, …)` truncated at level `N`.
//!
//! [`path_signature`] multiplies the closed-form signatures of the linear
//! pieces; [`oracle_signature`] integrates the defining recursion directly
//! with left-point Riemann sums and shares no code with it.

use std::io::BufRead;

use crate::algebra::TruncatedTensor;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPath {
    d: usize,
    points: Vec<Vec<f64>>,
}

impl PiecewiseLinearPath {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let d = points.first().ok_or(Error::EmptyPath)?.len();
        if d == 0 {
            return Err(Error::Invalid(
                "path points must have dimension >= 1".into(),
            ));
        }
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::ShapeMismatch {
                expected: vec![d],
                found: vec![p.len()],
            });
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("path coordinates must be finite".into()));
        }
        Ok(PiecewiseLinearPath { d, points })
    }

    /// Reads one point per line, comma-separated. A first line that does not
    /// parse as numbers is treated as a header; blank lines are skipped.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            match parsed {
                Ok(p) => points.push(p),
                Err(_) if lineno == 0 => continue,
                Err(e) => {
                    return Err(Error::Invalid(format!(
                        "line {}: {e}: `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        PiecewiseLinearPath::new(points)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Number of linear pieces, zero for a constant path.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Position at time `u ∈ [0, 1]`.
    pub fn at(&self, u: f64) -> Vec<f64> {
        let k = self.segments();
        if k == 0 {
            return self.points[0].clone();
        }
        let scaled = u.clamp(0.0, 1.0) * k as f64;
        let seg = (scaled.floor() as usize).min(k - 1);
        let frac = scaled - seg as f64;
        let (a, b) = (&self.points[seg], &self.points[seg + 1]);
        a.iter().zip(b).map(|(x, y)| x + frac * (y - x)).collect()
    }
}

/// A truncated signature together with the interval it was taken over.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub value: TruncatedTensor<f64>,
    pub interval: (f64, f64),
}

fn check_interval(s: f64, t: f64) -> Result<()> {
    if !(0.0 <= s && s <= t && t <= 1.0) {
        return Err(Error::InvalidInterval { s, t });
    }
    Ok(())
}

/// Signature of a single linear piece: level `n` is `Δ^{⊗n} / n!`.
pub fn segment_signature(increment: &[f64], depth: usize) -> Result<TruncatedTensor<f64>> {
    let d = increment.len();
    let delta = DenseTensor::vector(increment.to_vec())?;
    let mut levels = Vec::with_capacity(depth + 1);
    let mut current = DenseTensor::scalar(1.0);
    levels.push(current.clone());
    for n in 1..=depth {
        current = current.tensor_product(&delta).scale(&(1.0 / n as f64));
        levels.push(current.clone());
    }
    TruncatedTensor::from_levels(d, levels)
}

/// Signature of `path` over `[s, t]`, the ordered product of the signatures
/// of the clipped linear pieces.
pub fn path_signature(
    path: &PiecewiseLinearPath,
    depth: usize,
    s: f64,
    t: f64,
) -> Result<Signature> {
    check_interval(s, t)?;
    let mut value = TruncatedTensor::unit(path.dim(), depth)?;
    let k = path.segments();
    for seg in 0..k {
        let (lo, hi) = (seg as f64 / k as f64, (seg + 1) as f64 / k as f64);
        let (a, b) = (lo.max(s), hi.min(t));
        if a >= b {
            continue;
        }
        let start = path.at(a);
        let end = path.at(b);
        let increment: Vec<f64> = end.iter().zip(&start).map(|(e, s)| e - s).collect();
        value = value.concat_product(&segment_signature(&increment, depth)?)?;
    }
    Ok(Signature {
        value,
        interval: (s, t),
    })
}

/// Direct numerical evaluation of the iterated integrals.
///
/// Uses the recursion `S_0 ≡ 1`, `S_n(u) = ∫_s^u S_{n-1} ⊗ dx` with a
/// left-point Riemann sum on `steps` uniform cells of `[s, t]`. The error is
/// `O(1/steps)`. Summation order is fixed, so results are bit-stable.
pub fn oracle_signature(
    path: &PiecewiseLinearPath,
    depth: usize,
    s: f64,
    t: f64,
    steps: usize,
) -> Result<Signature> {
    check_interval(s, t)?;
    if steps == 0 {
        return Err(Error::Invalid("oracle needs at least one step".into()));
    }
    let d = path.dim();
    // levels[n] is a flat row-major array of d^n running integrals.
    let mut levels: Vec<Vec<f64>> = (0..=depth).map(|n| vec![0.0; d.pow(n as u32)]).collect();
    levels[0][0] = 1.0;
    let h = (t - s) / steps as f64;
    let mut prev = path.at(s);
    for j in 0..steps {
        let next = path.at(if j + 1 == steps {
            t
        } else {
            s + (j + 1) as f64 * h
        });
        let dx: Vec<f64> = next.iter().zip(&prev).map(|(a, b)| a - b).collect();
        // Highest level first so every update reads left-point values.
        for n in (1..=depth).rev() {
            let (lower, upper) = levels.split_at_mut(n);
            let below = &lower[n - 1];
            let level = &mut upper[0];
            for (i, &b) in below.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                for (k, &dxk) in dx.iter().enumerate() {
                    level[i * d + k] += b * dxk;
                }
            }
        }
        prev = next;
    }
    Ok(Signature {
        value: TruncatedTensor::from_flat_levels(d, levels)?,
        interval: (s, t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(points: &[&[f64]]) -> PiecewiseLinearPath {
        PiecewiseLinearPath::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn zero_increment_is_unit() {
        let sig = segment_signature(&[0.0, 0.0], 3).unwrap();
        assert_eq!(sig, TruncatedTensor::unit(2, 3).unwrap());
    }

    #[test]
    fn one_dimensional_levels_are_inverse_factorials() {
        let sig = segment_signature(&[1.0], 3).unwrap();
        let flat: Vec<f64> = sig.levels().iter().map(|l| l.coeffs()[0]).collect();
        assert!(close(&flat, &[1.0, 1.0, 0.5, 1.0 / 6.0], 1e-15));
    }

    #[test]
    fn level_two_of_a_linear_piece() {
        let sig = segment_signature(&[1.0, 2.0], 2).unwrap();
        assert!(close(
            sig.levels()[2].coeffs(),
            &[0.5, 1.0, 1.0, 2.0],
            1e-15
        ));
    }

    #[test]
    fn empty_interval_gives_unit() {
        let p = path(&[&[0.0, 0.0], &[1.0, 3.0], &[-2.0, 1.0]]);
        let sig = path_signature(&p, 3, 0.4, 0.4).unwrap();
        assert_eq!(sig.value, TruncatedTensor::unit(2, 3).unwrap());
        assert_eq!(
            path_signature(&p, 2, 0.0, 1.0)
                .unwrap()
                .value
                .levels()
                .len(),
            3
        );
    }

    #[test]
    fn two_segment_level_two() {
        let p = path(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0]]);
        let sig = path_signature(&p, 2, 0.0, 1.0).unwrap();
        assert!(close(
            sig.value.levels()[2].coeffs(),
            &[0.5, 1.0, 0.0, 0.5],
            1e-15
        ));
        let oracle = oracle_signature(&p, 2, 0.0, 1.0, 100_000).unwrap();
        assert!(sig.value.max_abs_diff(&oracle.value).unwrap() < 1e-4);
    }

    #[test]
    fn level_one_is_the_increment_on_subintervals() {
        let p = path(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[3.0, -1.0]]);
        let (s, t) = (0.2, 0.9);
        let sig = path_signature(&p, 2, s, t).unwrap();
        let inc: Vec<f64> = p.at(t).iter().zip(p.at(s)).map(|(a, b)| a - b).collect();
        assert!(close(sig.value.levels()[1].coeffs(), &inc, 1e-12));
    }

    #[test]
    fn constant_paths() {
        let p = path(&[&[2.0, -1.0]]);
        let unit = TruncatedTensor::unit(2, 3).unwrap();
        assert_eq!(path_signature(&p, 3, 0.0, 1.0).unwrap().value, unit);
        assert_eq!(oracle_signature(&p, 3, 0.0, 1.0, 7).unwrap().value, unit);
    }

    #[test]
    fn oracle_on_linear_path() {
        let p = path(&[&[0.0], &[1.0]]);
        let sig = oracle_signature(&p, 2, 0.0, 1.0, 100_000).unwrap();
        assert!((sig.value.levels()[2].coeffs()[0] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn bad_inputs() {
        let p = path(&[&[0.0], &[1.0]]);
        assert!(matches!(
            path_signature(&p, 2, 0.7, 0.2),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(path_signature(&p, 2, -0.1, 0.5).is_err());
        assert!(oracle_signature(&p, 2, 0.0, 1.0, 0).is_err());
        assert!(matches!(
            PiecewiseLinearPath::new(vec![]),
            Err(Error::EmptyPath)
        ));
        assert!(PiecewiseLinearPath::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn csv_with_and_without_header() {
        let with = PiecewiseLinearPath::from_csv("x,y\n0,0\n1, 2\n\n".as_bytes()).unwrap();
        let without = PiecewiseLinearPath::from_csv("0,0\n1,2\n".as_bytes()).unwrap();
        assert_eq!(with, without);
        assert_eq!(with.dim(), 2);
        assert!(PiecewiseLinearPath::from_csv("0,0\n1,x\n".as_bytes()).is_err());
        assert!(matches!(
            PiecewiseLinearPath::from_csv("x,y\n".as_bytes()),
            Err(Error::EmptyPath)
        ));
    }
}
