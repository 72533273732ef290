//! Turán expressions T_n = P_n² − P_{n−1}P_{n+1} for h = n^s on the default grid.

use turanpoly::grid::{default_s_grid, default_x_grid};
use turanpoly::turan::{turan_sweep, DEFAULT_REL_TOL};
use turanpoly::{ArithmeticFunctionSpec, Precision};

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    let grid = default_x_grid();
    for s in default_s_grid() {
        let h = ArithmeticFunctionSpec::power(s);
        let r = turan_sweep(&h, 30, &grid, false, prec, DEFAULT_REL_TOL)?;
        println!(
            "{:<12} points = {:>4}  min T/scale = {:.3e}  passed = {}",
            r.h,
            r.points.len(),
            r.minimum_relative.unwrap_or(f64::NAN),
            r.passed
        );
    }
    Ok(())
}
