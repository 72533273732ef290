//! Zeros of P_n^{id,h} from the Jacobi matrix, cross-checked against exact
//! Sturm isolation of the generated polynomial.

use turanpoly::poly::generate_convolution;
use turanpoly::zeros::{interlacing_check, sturm_roots, zeros_of_p, DEFAULT_TOL};
use turanpoly::{ArithmeticFunctionSpec, Precision, Scalar};

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    let h = ArithmeticFunctionSpec::Identity;
    let fam = generate_convolution(&ArithmeticFunctionSpec::Identity, &h, 8, prec)?;

    let mut prev: Option<Vec<Scalar>> = None;
    for n in 1..=8 {
        let z = zeros_of_p(&h, n, DEFAULT_TOL, prec)?;
        let oracle = sturm_roots(&fam.polys[n], 1e-13)?;
        let diff = z
            .iter()
            .zip(&oracle)
            .map(|(e, o)| (e - &Scalar::Rational(o.midpoint())).abs().to_f64())
            .fold(0.0, f64::max);
        let nonzero = z[..n - 1].to_vec();
        let interlaces = match &prev {
            Some(p) => interlacing_check(p, &nonzero)?,
            None => true,
        };
        let shown: Vec<String> = z.iter().map(|v| format!("{:.6}", v.to_f64())).collect();
        println!("n = {n}: [{}]  oracle diff {diff:.1e}  interlaces {interlaces}", shown.join(", "));
        prev = Some(nonzero);
    }
    Ok(())
}
