// Truncated signatures of piecewise-linear paths.
//
// Run with `cargo run --example signatures`.

use tenfac::signature::{oracle_signature, path_signature, PiecewiseLinearPath};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Right, then up.
    let path = PiecewiseLinearPath::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]])?;
    let sig = path_signature(&path, 3, 0.0, 1.0)?;
    for (n, level) in sig.value.levels().iter().enumerate() {
        println!("level {n}: {:?}", level.coeffs());
    }

    // The antisymmetric part of level 2 is the signed area (Lévy area).
    let l2 = sig.value.levels()[2].coeffs();
    println!("area = {}", 0.5 * (l2[1] - l2[2]));

    // Up, then right: same increment, opposite area.
    let other = PiecewiseLinearPath::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])?;
    let l2 = path_signature(&other, 2, 0.0, 1.0)?.value.levels()[2]
        .coeffs()
        .to_vec();
    println!("reversed order area = {}", 0.5 * (l2[1] - l2[2]));

    // Signatures over adjacent intervals multiply to the whole.
    let left = path_signature(&path, 3, 0.0, 0.3)?.value;
    let right = path_signature(&path, 3, 0.3, 1.0)?.value;
    let diff = left.concat_product(&right)?.max_abs_diff(&sig.value)?;
    println!("|S(0,0.3) S(0.3,1) - S(0,1)| = {diff:e}");

    // Direct quadrature of the iterated integrals agrees to O(1/steps).
    let oracle = oracle_signature(&path, 3, 0.0, 1.0, 20_000)?;
    println!(
        "oracle deviation = {:e}",
        oracle.value.max_abs_diff(&sig.value)?
    );
    Ok(())
}
