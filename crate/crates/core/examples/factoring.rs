// Parsing, expanding and factoring tensor-product expressions.
//
// Run with `cargo run --example factoring`.

use tenfac::expr::{factor_exact_order2, factor_greedy, parse, GroupDirection};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    for src in [
        "a1@b1 + a1@b2 + a2@b1 + a2@b2",
        "a1@b1 + a1@b3 + a2@b2 + a2@b3",
        "-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2",
    ] {
        let e = parse(src)?;
        let f = factor_exact_order2(&e)?;
        println!("{src}\n  = {f}   ({} -> {} terms)", e.len(), f.len());
        assert_eq!(f.expand()?, e.expand()?);
    }

    // The coefficient array behind an expression.
    let e = parse("-x@y + 2 x^2@y + 3 x@y^2 - 4 x^2@y^2 + x^3@y^2")?;
    let (t, basis) = e.to_coefficient_tensor()?;
    println!("\nbases {:?}\ncoefficients {t}", basis.slots);

    // Greedy grouping depends on which side it groups first and can miss the minimum.
    let x = parse("a1@b1 + a2@b2 + a1@b3 + a2@b3")?;
    let left = factor_greedy(&x, GroupDirection::Left)?;
    let right = factor_greedy(&x, GroupDirection::Right)?;
    let best = factor_exact_order2(&x)?;
    println!("\n{x}");
    println!("  greedy left:  {left}   ({} terms)", left.len());
    println!("  greedy right: {right}   ({} terms)", right.len());
    println!("  exact:        {best}   ({} terms)", best.len());

    println!("\nexpanded: {}", parse("(a1 + a2)@(b1 - 2 b2)")?.expand()?);
    Ok(())
}
