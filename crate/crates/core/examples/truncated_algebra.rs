// Arithmetic in the truncated tensor algebra.
//
// Run with `cargo run --example truncated_algebra`.

use tenfac::algebra::{truncated_dim, TruncatedTensor, Word};
use tenfac::scalar::{int, Rational};

fn element(levels: Vec<Vec<i64>>) -> TruncatedTensor<Rational> {
    let levels = levels
        .into_iter()
        .map(|l| l.into_iter().map(int).collect())
        .collect();
    TruncatedTensor::from_flat_levels(2, levels).unwrap()
}

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("dim T^2(R^2) = {}", truncated_dim(2, 2));
    println!("dim T^3(R^3) = {}", truncated_dim(3, 3));

    let x = element(vec![vec![2], vec![1, 0], vec![0, 0, 0, 0]]);
    let y = element(vec![vec![3], vec![0, 1], vec![0, 0, 0, 0]]);
    let xy = x.concat_product(&y)?;
    println!("x ⊗ y levels:");
    for (n, level) in xy.levels().iter().enumerate() {
        println!("  {n}: {level}");
    }
    // The product is not commutative: level 2 picks up e1e2 but not e2e1.
    let yx = y.concat_product(&x)?;
    let e12 = Word::new(vec![1, 2], 2)?;
    println!(
        "coefficient of e1e2: xy = {}, yx = {}",
        xy.coeff(&e12)?,
        yx.coeff(&e12)?
    );

    // Anything with a non-zero scalar part is invertible.
    let z = element(vec![vec![2], vec![1, 0], vec![1, 0, 0, 0]]);
    let inv = z.inverse()?;
    println!("z^-1 levels:");
    for (n, level) in inv.levels().iter().enumerate() {
        println!("  {n}: {level}");
    }
    assert_eq!(z.concat_product(&inv)?, TruncatedTensor::unit(2, 2)?);

    let nilpotent = element(vec![vec![0], vec![1, 0], vec![0, 0, 0, 0]]);
    println!("inverting (0, e1, 0): {}", nilpotent.inverse().unwrap_err());

    // Dropping the top level commutes with multiplication.
    assert_eq!(
        xy.project(1)?,
        x.project(1)?.concat_product(&y.project(1)?)?
    );
    println!(
        "projection to level 1 of x ⊗ y: {:?}",
        xy.project(1)?
            .levels()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    Ok(())
}
