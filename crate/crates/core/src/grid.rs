//! Exact grids for `x` and `s` sweeps.
//!
//! A grid is written either as `a:b:step` (inclusive of `b` when it is hit
//! exactly) or as a comma-separated list. Every entry is parsed as an exact
//! rational, so `0:1:0.1` yields exactly `k/10`.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper bound on grid size, to catch typos like `0:1e6:1e-6`.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// Sorted, deduplicated grid points.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::InvalidGrid(text.to_string()));
    }
    let bad = |_| Error::InvalidGrid(text.to_string());
    let mut points = if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid(text.to_string()));
        }
        let a = Scalar::parse_rational(parts[0]).map_err(bad)?;
        let b = Scalar::parse_rational(parts[1]).map_err(bad)?;
        let step = Scalar::parse_rational(parts[2]).map_err(bad)?;
        if step.cmp0() != std::cmp::Ordering::Greater || b < a {
            return Err(Error::InvalidGrid(text.to_string()));
        }
        let count = Rational::from(&b - &a) / &step;
        let (_, last) = count.fract_floor(Integer::new());
        let last = last
            .to_usize()
            .filter(|&k| k < MAX_GRID_POINTS)
            .ok_or_else(|| Error::InvalidGrid(text.to_string()))?;
        (0..=last).map(|k| &a + Rational::from(&step * Integer::from(k))).collect()
    } else {
        t.split(',')
            .map(|item| Scalar::parse_rational(item).map_err(bad))
            .collect::<Result<Vec<_>>>()?
    };
    points.sort();
    points.dedup();
    Ok(points)
}

/// `{0} ∪ {10^k : k = −3..1} ∪ {1, 2, …, 50}`.
pub fn default_x_grid() -> Vec<Rational> {
    let mut points = vec![Rational::new()];
    for k in -3i32..=1 {
        let p = if k < 0 {
            Rational::from((1, 10i64.pow((-k) as u32)))
        } else {
            Rational::from(10i64.pow(k as u32))
        };
        points.push(p);
    }
    points.extend((1..=50).map(Rational::from));
    points.sort();
    points.dedup();
    points
}

/// `{0, 0.1, …, 1}`.
pub fn default_s_grid() -> Vec<Rational> {
    (0..=10).map(|k| Rational::from((k, 10))).collect()
}

/// Exact decimal when the denominator divides a power of ten, `p/q` otherwise.
pub fn decimal_string(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den.is_divisible_u(2) {
        den /= 2;
        twos += 1;
    }
    while den.is_divisible_u(5) {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return r.to_string();
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return r.numer().to_string();
    }
    let scaled = Rational::from(r * Integer::from(Integer::u_pow_u(10, digits)));
    let n = scaled.numer().clone();
    let negative = n < 0;
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac_part)
}
