//! Zeros of P_7^{id,h_s} as s runs from 0 (Chebyshev) to 1 (Laguerre), as CSV.
//!
//! cargo run --example zero_trajectory > trajectory.csv

use turanpoly::grid::parse_grid;
use turanpoly::zeros::{check_endpoints, trajectory, trajectory_csv, DEFAULT_TOL};
use turanpoly::Precision;

fn main() -> turanpoly::Result<()> {
    let prec = Precision::default();
    let grid = parse_grid("0:1:0.01")?;
    let traj = trajectory(7, &grid, DEFAULT_TOL, prec)?;
    let ends = check_endpoints(&traj, &grid, DEFAULT_TOL, 1e-10, prec)?;
    eprintln!(
        "endpoint errors: chebyshev {:?}, laguerre {:?}; min gap {:.4}",
        ends.chebyshev_error, ends.laguerre_error, traj.min_gap
    );
    print!("{}", trajectory_csv(&traj));
    Ok(())
}
