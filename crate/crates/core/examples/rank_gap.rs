// An order-3 tensor whose shortest decomposition is shorter over the
// complex numbers than over the reals.
//
// Run with `cargo run --release --example rank_gap`.

use num::complex::Complex64;
use tenfac::expr::{
    factor_greedy, factor_heuristic_higher_order, parse, AlsConfig, GroupDirection,
};
use tenfac::scalar::Scalar;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = parse("u1@v1@w1 + u1@v2@w2 - u2@v1@w2 + u2@v2@w1")?;
    println!("Z = {z}");
    println!(
        "greedy: {} terms",
        factor_greedy(&z, GroupDirection::Left)?.len()
    );

    let config = AlsConfig::default();
    let real = factor_heuristic_higher_order(&z.map_field(f64::from_rational), &config)?;
    println!(
        "real ALS: {} with {} terms (residual {:e})",
        real.status.as_str(),
        real.expr.len(),
        real.residual
    );
    let capped = AlsConfig {
        max_rank: Some(2),
        ..config.clone()
    };
    let two = factor_heuristic_higher_order(&z.map_field(f64::from_rational), &capped)?;
    println!(
        "real ALS capped at 2 terms: {} (best residual {:e})",
        two.status.as_str(),
        two.residual
    );

    let complex = factor_heuristic_higher_order(&z.map_field(Complex64::from_rational), &config)?;
    println!(
        "complex ALS: {} with {} terms (residual {:e})",
        complex.status.as_str(),
        complex.expr.len(),
        complex.residual
    );
    println!("{}", complex.expr);
    // Failing to find two real terms is evidence, not a proof, that none exist.
    Ok(())
}
