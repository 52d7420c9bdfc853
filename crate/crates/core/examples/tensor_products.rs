// Tensor products of dense coefficient arrays.
//
// Run with `cargo run --example tensor_products`.

use tenfac::scalar::{int, rational, Rational};
use tenfac::tensor::DenseTensor;

fn vector(xs: &[i64]) -> DenseTensor<Rational> {
    DenseTensor::vector(xs.iter().map(|&x| int(x)).collect()).unwrap()
}

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = vector(&[1, 2]);
    let v = vector(&[3, 0, -1]);

    // The product of a 2-vector and a 3-vector is a 2×3 array of all pairwise products.
    let uv = u.tensor_product(&v);
    println!("u ⊗ v = {uv}");
    println!(
        "shape {:?}, component (2,1) = {}",
        uv.dims(),
        uv.component(&[2, 1])?
    );

    // Order adds up: (u ⊗ v) ⊗ u has three indices.
    let uvu = DenseTensor::multi_tensor_product([&u, &v, &u])?;
    println!("(u ⊗ v ⊗ u) has shape {:?}", uvu.dims());

    // Bilinearity: scaling both factors by λ scales the product by λ².
    let half = rational(1, 2);
    let scaled = u.scale(&half).tensor_product(&v.scale(&half));
    assert_eq!(scaled, uv.scale(&(&half * &half)));
    println!("(u/2) ⊗ (v/2) = {scaled}");

    // Standard basis vectors are 1-based; e2 ⊗ e3 has a single one at (2,3).
    let e = DenseTensor::<Rational>::basis_vector(2, 2)?
        .tensor_product(&DenseTensor::basis_vector(3, 3)?);
    println!("e2 ⊗ e3 = {e}");

    // Not every 2×2 array is a single product.
    let sum = DenseTensor::<Rational>::basis_vector(2, 1)?
        .tensor_product(&DenseTensor::basis_vector(2, 1)?)
        .add(&DenseTensor::basis_vector(2, 2)?.tensor_product(&DenseTensor::basis_vector(2, 2)?))?;
    println!("e1 ⊗ e1 + e2 ⊗ e2 = {sum}");
    Ok(())
}
