//! Orthogonality data for q_n^h: recurrence coefficients, moments, Hankel
//! determinants and the definiteness verdict.

use turanpoly::favard::{affine_transform, favard_report, moments_from_recurrence, ThreeTermRecurrence};
use turanpoly::{ArithmeticFunctionSpec, Precision, Scalar};

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    for h in ["one", "id", "altsign"] {
        let h = ArithmeticFunctionSpec::parse(h)?;
        let r = favard_report(&h, 6, Scalar::one(), prec)?;
        let delta: Vec<String> = r.delta.iter().map(Scalar::to_repr_string).collect();
        println!("{h}: {:?}, orthogonal = {}, Δ = [{}]", r.verdict, r.orthogonal, delta.join(", "));
    }

    // Monic Chebyshev U on [-1, 1] moved to x ↦ x/2 + 1.
    let cheb = ThreeTermRecurrence::constant(Scalar::zero(), Scalar::from_ratio(1, 4), 6);
    let mu = moments_from_recurrence(&cheb, 6, Scalar::one())?;
    let (rec, _) = affine_transform(&cheb, &mu, &Scalar::from_ratio(1, 2), &Scalar::one())?;
    println!("transformed: c = {}, λ = {}", rec.c_n(2).to_repr_string(), rec.lambda_n(2).to_repr_string());
    Ok(())
}
