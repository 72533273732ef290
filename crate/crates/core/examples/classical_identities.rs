//! Check the Chebyshev and Laguerre representations and print which sign of
//! the argument each Laguerre identity needs.

use turanpoly::classical::verify_identities;

fn main() -> turanpoly::Result<()> {
    let report = verify_identities(20)?;
    for c in &report.identities {
        let variant = match (c.printed_variant, c.resolved_variant) {
            (Some(p), Some(r)) if p != r => format!("  (written {p:?}, holds for {r:?})"),
            (_, Some(r)) => format!("  ({r:?})"),
            _ => String::new(),
        };
        println!("{:<30} {}{variant}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    println!("all passed: {}", report.all_passed);
    Ok(())
}
