//! v-root monotonicity, the ratio lower bound and the D(n) criterion.

use turanpoly::grid::default_x_grid;
use turanpoly::turan::{check_ratio_bound, check_v_monotone, d_criterion_vs_v, v_roots, DEFAULT_REL_TOL};
use turanpoly::{ArithmeticFunctionSpec, Precision, Scalar};

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    let grid = default_x_grid();
    for h in ["one", "power:1/2", "id"] {
        let h = ArithmeticFunctionSpec::parse(h)?;
        let mono = check_v_monotone(&h, 30, &grid, prec, DEFAULT_REL_TOL)?;
        let bound = check_ratio_bound(&h, 30, &grid, prec, DEFAULT_REL_TOL)?;
        let d = d_criterion_vs_v(&h, 30, prec, DEFAULT_REL_TOL)?;
        println!(
            "{h}: v decreasing = {}, ratio bound = {}, D consistent = {}",
            mono.passed, bound.passed, d.consistent
        );
        let v = v_roots(&h, 3, &Scalar::one(), prec)?;
        println!("  v_3(1) = ({:.6}, {:.6})", v.v1.to_f64(), v.v2.to_f64());
    }
    let lemma = ArithmeticFunctionSpec::Identity.lemma_side_conditions(50, prec)?;
    println!("lemma conditions for id, n <= 50: {}", lemma.all_hold);
    Ok(())
}
