// Rank and rank decompositions of matrices, exact and in floating point.
//
// Run with `cargo run --example rank_decomposition`.

use tenfac::rank2::{
    rank_decompose_rref, rank_decompose_svd, render_decomposition, verify_decomposition, Matrix,
};
use tenfac::scalar::{int, Rational, Scalar};

fn exact(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    for m in [
        exact(&[&[3, 4], &[6, 8]]),
        exact(&[&[1, 0], &[1, 1]]),
        exact(&[&[3, 4, 2], &[1, 2, 1], &[0, -2, -1]]),
    ] {
        let dec = rank_decompose_rref(&m);
        println!("rank {}", dec.rank);
        println!("{}\n", render_decomposition(&m, &dec.terms()));
        let check = verify_decomposition(&m.to_tensor()?, &dec.terms())?;
        assert!(check.holds);
    }

    // The same matrix through the SVD: same rank, different (orthogonal) factors.
    let m = exact(&[&[3, 4, 2], &[1, 2, 1], &[0, -2, -1]]).map(f64::from_rational);
    let dec = rank_decompose_svd(&m)?;
    println!("SVD rank {}", dec.rank);
    println!("{}", render_decomposition(&m, &dec.terms()));
    println!(
        "reconstruction error {:e}",
        dec.reconstruct().max_abs_diff(&m)?
    );
    Ok(())
}
