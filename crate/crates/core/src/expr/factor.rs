use super::als::{cp_als, AlsConfig, AlsField};
use super::{SlotBasis, SlotVector, TensorExpr, Term};
use crate::error::{Error, Result};
use crate::rank2::{
    rank_decompose_rref, rank_decompose_svd, verify_decomposition, Matrix, RankOneTermList,
};
use crate::scalar::{Rational, Scalar};

/// Builds `Σ_l (Σ_i F_1[l,i] s_{1,i}) @ … @ (Σ_i F_m[l,i] s_{m,i})` from
/// factor matrices with one row per term. Zero coefficients are omitted and
/// terms with a zero slot are dropped.
pub fn from_factor_matrices<S: Scalar>(
    basis: &SlotBasis,
    factors: &[Matrix<S>],
) -> Result<TensorExpr<S>> {
    if factors.len() != basis.slots.len() {
        return Err(Error::WrongOrder {
            expected: basis.slots.len(),
            found: factors.len(),
        });
    }
    let rank = factors.first().map_or(0, Matrix::rows);
    for (f, b) in factors.iter().zip(&basis.slots) {
        if f.rows() != rank || f.cols() != b.len() {
            return Err(Error::ShapeMismatch {
                expected: vec![rank, b.len()],
                found: vec![f.rows(), f.cols()],
            });
        }
    }
    let mut terms = Vec::with_capacity(rank);
    for l in 0..rank {
        let slots: Vec<SlotVector<S>> = factors
            .iter()
            .zip(&basis.slots)
            .map(|(f, b)| SlotVector {
                entries: b
                    .iter()
                    .zip(f.row(l))
                    .filter(|(_, c)| !c.is_negligible())
                    .map(|(s, c)| (s.clone(), c.clone()))
                    .collect(),
            })
            .collect();
        if slots.iter().all(|s| !s.entries.is_empty()) {
            terms.push(
                Term {
                    coeff: S::one(),
                    slots,
                }
                .tidy(),
            );
        }
    }
    Ok(TensorExpr { terms })
}

fn order2_matrix<S: Scalar>(e: &TensorExpr<S>) -> Result<Option<(Matrix<S>, SlotBasis)>> {
    match e.order() {
        None => Ok(None),
        Some(2) => {
            let basis = e.slot_basis()?.sorted();
            let t = e.coefficients_in(&basis)?;
            Ok(Some((Matrix::from_tensor(&t)?, basis)))
        }
        Some(m) => Err(Error::WrongOrder {
            expected: 2,
            found: m,
        }),
    }
}

/// Minimum-length rewriting of an order-2 expression: one term per unit of
/// rank of the coefficient matrix, computed exactly.
pub fn factor_exact_order2(e: &TensorExpr<Rational>) -> Result<TensorExpr<Rational>> {
    let Some((m, basis)) = order2_matrix(e)? else {
        return Ok(TensorExpr::zero());
    };
    let dec = rank_decompose_rref(&m);
    from_factor_matrices(&basis, &[dec.d1, dec.d2])
}

/// Floating-point counterpart of [`factor_exact_order2`] through the SVD.
pub fn factor_exact_order2_svd(e: &TensorExpr<f64>) -> Result<TensorExpr<f64>> {
    let Some((m, basis)) = order2_matrix(e)? else {
        return Ok(TensorExpr::zero());
    };
    let dec = rank_decompose_svd(&m)?;
    from_factor_matrices(&basis, &[dec.d1, dec.d2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupDirection {
    /// Merge terms that differ only in the first slot first.
    Left,
    /// Merge terms that differ only in the last slot first.
    Right,
}

/// Merges terms that agree on every slot except `k`. Returns whether
/// anything changed.
fn merge_slot<S: Scalar>(terms: &mut Vec<Term<S>>, k: usize) -> bool {
    let before = terms.len();
    let mut out: Vec<Term<S>> = Vec::with_capacity(before);
    for t in terms.drain(..) {
        let partner = out.iter_mut().find(|o| {
            o.slots
                .iter()
                .zip(&t.slots)
                .enumerate()
                .all(|(j, (a, b))| j == k || a.same_vector(b))
        });
        match partner {
            Some(o) => {
                let mut entries = o.slots[k].scaled(&o.coeff).entries;
                entries.extend(t.slots[k].scaled(&t.coeff).entries);
                o.slots[k] = SlotVector { entries }.normalized();
                o.coeff = S::one();
            }
            None => out.push(t),
        }
    }
    out.retain(|t| t.slots.iter().all(|s| !s.entries.is_empty()));
    *terms = out;
    terms.len() != before
}

/// Greedy distributive grouping.
///
/// Starts from the expanded form and repeatedly merges `a@c + b@c` into
/// `(a+b)@c`, cycling over the slots in the chosen direction until a full
/// cycle changes nothing. The result is a valid rewriting but generally not
/// of minimal length, and it depends on the direction.
pub fn factor_greedy<S: Scalar>(
    e: &TensorExpr<S>,
    direction: GroupDirection,
) -> Result<TensorExpr<S>> {
    let mut terms = e.expand()?.terms;
    let Some(order) = terms.first().map(|t| t.slots.len()) else {
        return Ok(TensorExpr::zero());
    };
    let slots: Vec<usize> = match direction {
        GroupDirection::Left => (0..order).collect(),
        GroupDirection::Right => (0..order).rev().collect(),
    };
    loop {
        let mut changed = false;
        for &k in &slots {
            changed |= merge_slot(&mut terms, k);
        }
        if !changed {
            break;
        }
    }
    Ok(TensorExpr {
        terms: terms.into_iter().map(Term::tidy).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicStatus {
    /// The returned expression re-expands to the input, so its length is an
    /// upper bound on the rank. Minimality is not certified.
    VerifiedUpperBound,
    /// No decomposition up to the rank cap re-expanded within tolerance.
    Failed,
}

impl HeuristicStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            HeuristicStatus::VerifiedUpperBound => "verified-upper-bound",
            HeuristicStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicOutcome<S> {
    pub status: HeuristicStatus,
    /// Number of terms when verified.
    pub rank: Option<usize>,
    /// The factored expression; the expanded input on failure.
    pub expr: TensorExpr<S>,
    pub terms: RankOneTermList<S>,
    pub basis: SlotBasis,
    /// Max componentwise residual of the best attempt.
    pub residual: f64,
}

/// Searches for a short decomposition by alternating least squares, trying
/// `r = 1, 2, …` and returning the first `r` whose decomposition re-expands
/// within `config.tol`.
pub fn factor_heuristic_higher_order<S: AlsField>(
    e: &TensorExpr<S>,
    config: &AlsConfig,
) -> Result<HeuristicOutcome<S>> {
    let basis = e.slot_basis()?.sorted();
    let target = e.coefficients_in(&basis)?;
    if target.coeffs().iter().all(|c| c.is_negligible()) {
        return Ok(HeuristicOutcome {
            status: HeuristicStatus::VerifiedUpperBound,
            rank: Some(0),
            expr: TensorExpr::zero(),
            terms: RankOneTermList { terms: Vec::new() },
            basis,
            residual: 0.0,
        });
    }
    let dims = target.dims().to_vec();
    let generic_bound = dims.iter().product::<usize>() / dims.iter().max().copied().unwrap_or(1);
    let max_rank = config.max_rank.unwrap_or(generic_bound).max(1);
    let mut best = f64::INFINITY;
    for rank in 1..=max_rank {
        for restart in 0..config.restarts {
            let seed = config.seed.wrapping_add(restart as u64);
            let Some(fit) = cp_als(&target, rank, config, seed) else {
                continue;
            };
            best = best.min(fit.residual);
            if fit.residual > config.tol {
                continue;
            }
            let terms = fit.terms();
            let check = verify_decomposition(&target, &terms)?;
            if check.residual <= config.tol {
                return Ok(HeuristicOutcome {
                    status: HeuristicStatus::VerifiedUpperBound,
                    rank: Some(rank),
                    expr: from_factor_matrices(&basis, &fit.factors)?,
                    terms,
                    basis,
                    residual: check.residual,
                });
            }
        }
    }
    Ok(HeuristicOutcome {
        status: HeuristicStatus::Failed,
        rank: None,
        expr: TensorExpr::from_coefficient_tensor(&target, &basis)?,
        terms: RankOneTermList { terms: Vec::new() },
        basis,
        residual: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use num::complex::Complex64;

    const Z: &str = "u1@v1@w1 + u1@v2@w2 - u2@v1@w2 + u2@v2@w1";

    fn exact(src: &str) -> TensorExpr<Rational> {
        factor_exact_order2(&parse(src).unwrap()).unwrap()
    }

    fn same_tensor<S: Scalar>(a: &TensorExpr<S>, b: &TensorExpr<S>) -> bool {
        let (ea, eb) = (a.expand().unwrap(), b.expand().unwrap());
        ea.terms.len() == eb.terms.len()
            && ea.terms.iter().zip(&eb.terms).all(|(x, y)| {
                x.coeff.approx_eq(&y.coeff)
                    && x.slots.iter().zip(&y.slots).all(|(p, q)| p.same_vector(q))
            })
    }

    fn residual<S: Scalar>(a: &TensorExpr<S>, b: &TensorExpr<S>) -> f64 {
        let basis = b.slot_basis().unwrap();
        let ta = a.coefficients_in(&basis).unwrap();
        ta.max_abs_diff(&b.coefficients_in(&basis).unwrap())
            .unwrap()
    }

    #[test]
    fn exact_order2_fixtures() {
        let e = exact("-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2");
        assert_eq!(e.to_string(), "(-x + 2 x^2)@y + (3 x - 4 x^2 + x^3)@y^2");
        assert_eq!(
            exact("a1@b1 + a1@b2 + a2@b1 + a2@b2").to_string(),
            "(a1 + a2)@(b1 + b2)"
        );
        assert_eq!(
            exact("a1@b1 + a1@b3 + a2@b2 + a2@b3").to_string(),
            "a1@(b1 + b3) + a2@(b2 + b3)"
        );
        assert_eq!(
            exact("a2@b2 + a1@b3 + a2@b3 + a1@b1"),
            exact("a1@b1 + a1@b3 + a2@b2 + a2@b3")
        );
        assert_eq!(exact("a1@b1 + a2@b2 + a1@b3 + a2@b3").len(), 2);
        let a = exact("3 a1@b1 + 4 a1@b2 + 6 a2@b1 + 8 a2@b2");
        assert_eq!(a.to_string(), "(3 a1 + 6 a2)@(b1 + 4/3 b2)");
        assert!(exact("a@b - a@b").is_empty());
        assert!(factor_exact_order2(&parse(Z).unwrap()).is_err());
    }

    #[test]
    fn exact_results_re_expand() {
        for src in [
            "-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2",
            "3 a1@b1 + 4 a1@b2 + 2 a1@b3 + a2@b1 + 2 a2@b2 + a2@b3 - 2 a3@b2 - a3@b3",
        ] {
            let e = parse(src).unwrap();
            assert!(same_tensor(&exact(src), &e));
            let real = e.map_field(f64::from_rational);
            let f = factor_exact_order2_svd(&real).unwrap();
            assert_eq!(f.len(), exact(src).len());
            assert!(same_tensor(&f, &real));
        }
    }

    #[test]
    fn greedy_depends_on_direction() {
        let x0b = parse("a1@b1 + a2@b2 + a1@b3 + a2@b3").unwrap();
        let left = factor_greedy(&x0b, GroupDirection::Left).unwrap();
        let right = factor_greedy(&x0b, GroupDirection::Right).unwrap();
        assert_eq!(left.to_string(), "a1@b1 + (a1 + a2)@b3 + a2@b2");
        assert_eq!(right.to_string(), "a1@(b1 + b3) + a2@(b2 + b3)");
        assert!(same_tensor(&left, &x0b));
        assert!(same_tensor(&right, &x0b));

        let x0a = parse("a1@b1 + a1@b2 + a2@b1 + a2@b2").unwrap();
        assert_eq!(factor_greedy(&x0a, GroupDirection::Left).unwrap().len(), 1);
        assert_eq!(factor_greedy(&x0a, GroupDirection::Right).unwrap().len(), 1);

        let z = parse(Z).unwrap();
        assert_eq!(factor_greedy(&z, GroupDirection::Left).unwrap().len(), 4);
    }

    #[test]
    fn greedy_drops_cancelled_terms() {
        let e = parse("a1@b1 - a2@b1 + a2@b1 - a1@b1").unwrap();
        assert!(factor_greedy(&e, GroupDirection::Left).unwrap().is_empty());
        let half = parse("a1@b1 + a1@b2 - a1@b1").unwrap();
        assert_eq!(
            factor_greedy(&half, GroupDirection::Right)
                .unwrap()
                .to_string(),
            "a1@b2"
        );
    }

    #[test]
    fn heuristic_on_z() {
        let z = parse(Z).unwrap();
        let cfg = AlsConfig::default();

        let complex = z.map_field(Complex64::from_rational);
        let out = factor_heuristic_higher_order(&complex, &cfg).unwrap();
        assert_eq!(out.status, HeuristicStatus::VerifiedUpperBound);
        assert_eq!(out.rank, Some(2));
        assert!(out.residual <= cfg.tol);
        assert!(residual(&out.expr, &complex) <= cfg.tol);

        let real = z.map_field(f64::from_rational);
        let two = AlsConfig {
            max_rank: Some(2),
            ..cfg.clone()
        };
        let failed = factor_heuristic_higher_order(&real, &two).unwrap();
        assert_eq!(failed.status, HeuristicStatus::Failed);
        assert!(same_tensor(&failed.expr, &real));

        let out = factor_heuristic_higher_order(&real, &cfg).unwrap();
        assert_eq!(out.rank, Some(3));
        assert!(residual(&out.expr, &real) <= cfg.tol);
    }

    #[test]
    fn heuristic_is_deterministic() {
        let z = parse(Z).unwrap().map_field(f64::from_rational);
        let cfg = AlsConfig::default();
        let a = factor_heuristic_higher_order(&z, &cfg).unwrap();
        let b = factor_heuristic_higher_order(&z, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn heuristic_on_zero() {
        let e = parse("a@b@c - a@b@c")
            .unwrap()
            .map_field(f64::from_rational);
        let out = factor_heuristic_higher_order(&e, &AlsConfig::default()).unwrap();
        assert_eq!(out.rank, Some(0));
        assert!(out.expr.is_empty());
    }
}
