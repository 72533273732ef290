//! Generate P_n^{id,h} by convolution and by the three-term recurrence and compare.
//!
//! cargo run --example generate_family -- id 6

use turanpoly::poly::{generate_convolution, generate_three_term};
use turanpoly::{ArithmeticFunctionSpec, Precision};

fn main() -> turanpoly::Result<()> {
    let mut args = std::env::args().skip(1);
    let h = ArithmeticFunctionSpec::parse(&args.next().unwrap_or_else(|| "id".into()))?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let prec = Precision::default();

    let conv = generate_convolution(&ArithmeticFunctionSpec::Identity, &h, n, prec)?;
    let three = generate_three_term(&h, n, prec)?;
    for (k, p) in conv.polys.iter().enumerate() {
        println!("P_{k} = [{}]", p.to_coeff_strings().join(", "));
    }
    println!("max relative distance between generators: {:e}", conv.max_relative_distance(&three));
    Ok(())
}
