//! Divisor sums σ(n) as h and as g. Only the convolution route handles g ≠ id.

use turanpoly::poly::generate_convolution;
use turanpoly::{ArithmeticFunctionSpec, Precision};

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    let sigma = ArithmeticFunctionSpec::SigmaDivisorSum;
    let id = ArithmeticFunctionSpec::Identity;

    for (g, h) in [(&id, &sigma), (&sigma, &id)] {
        println!("g = {g}, h = {h}");
        let fam = generate_convolution(g, h, 6, prec)?;
        for (n, p) in fam.polys.iter().enumerate() {
            println!("  P_{n} = [{}]", p.to_coeff_strings().join(", "));
        }
    }
    Ok(())
}
