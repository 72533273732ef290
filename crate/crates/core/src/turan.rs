//! Turán expressions `T_n(x) = P_n(x)² − P_{n−1}(x) P_{n+1}(x)` for `g = id`
//! and the root bounds behind their nonnegativity.
//!
//! With `r = P_n / P_{n−1}`, `T_n ≥ 0` is equivalent to
//! `r² − ((x + 2h(n))/h(n+1)) r + h(n−1)/h(n+1) ≥ 0`, whose larger root is
//! `v_{n,2}(x)`. The checks here evaluate that chain pointwise.

use rug::Rational;
use serde::Serialize;

use crate::arithfn::ArithmeticFunctionSpec;
use crate::error::{Error, Result};
use crate::grid::decimal_string;
use crate::poly::{backend_values, generate_three_term, DensePolynomial};
use crate::scalar::{Precision, Scalar, Sign};

/// Relative tolerance for float sign assertions.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct VRoots {
    pub n: usize,
    pub x: Scalar,
    pub v1: Scalar,
    pub v2: Scalar,
    pub discriminant: Scalar,
}

/// `h` values and `P_0..P_{n_max+1}` for repeated pointwise evaluation.
#[derive(Clone, Debug)]
pub struct TuranFamily {
    pub h: ArithmeticFunctionSpec,
    pub prec: Precision,
    /// `h(0..=n_max+2)`
    pub hv: Vec<Scalar>,
    /// `P_0..P_{n_max+1}`
    pub polys: Vec<DensePolynomial>,
}

impl TuranFamily {
    pub fn new(h: &ArithmeticFunctionSpec, n_max: usize, prec: Precision) -> Result<Self> {
        let polys = generate_three_term(h, n_max + 1, prec)?.polys;
        let hv = backend_values(h, n_max as u64 + 2, prec)?;
        Ok(TuranFamily { h: h.clone(), prec, hv, polys })
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 2
    }

    pub fn p(&self, n: usize, x: &Scalar) -> Scalar {
        self.polys[n].eval(x)
    }

    /// `T_n(x)` and the comparison scale `max(P_n², |P_{n−1} P_{n+1}|)`.
    pub fn turan_t(&self, n: usize, x: &Scalar) -> (Scalar, Scalar) {
        let (a, b, c) = (self.p(n - 1, x), self.p(n, x), self.p(n + 1, x));
        let sq = b.square();
        let cross = &a * &c;
        let scale = if sq > cross.abs() { sq.clone() } else { cross.abs() };
        (&sq - &cross, scale)
    }

    pub fn v_roots(&self, n: usize, x: &Scalar) -> Result<VRoots> {
        v_roots_from_values(&self.hv, n, x, self.prec)
    }
}

/// `T_n(x)` for `h` directly (`n ≥ 1`, `P_0 = 1`).
pub fn turan_t(h: &ArithmeticFunctionSpec, n: usize, x: &Scalar, prec: Precision) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::Insufficient("T_n needs n >= 1".into()));
    }
    Ok(TuranFamily::new(h, n, prec)?.turan_t(n, x).0)
}

/// Roots of `h(n+1) v² − (x + 2h(n)) v + h(n−1) = 0`:
/// `v = (x + 2h(n) ∓ √(x² + 4h(n)x + 4Δ_h(n))) / (2h(n+1))`.
pub fn v_roots(h: &ArithmeticFunctionSpec, n: usize, x: &Scalar, prec: Precision) -> Result<VRoots> {
    let hv = backend_values(h, n as u64 + 1, prec)?;
    v_roots_from_values(&hv, n, x, prec)
}

fn v_roots_from_values(hv: &[Scalar], n: usize, x: &Scalar, prec: Precision) -> Result<VRoots> {
    if n == 0 {
        return Err(Error::Insufficient("v-roots need n >= 1".into()));
    }
    let (h_prev, h_n, h_next) = (&hv[n - 1], &hv[n], &hv[n + 1]);
    if h_next.is_zero() {
        return Err(Error::ZeroValue(n as u64 + 1));
    }
    let b = x + &(&Scalar::from_int(2) * h_n);
    let disc = &b.square() - &(&Scalar::from_int(4) * &(h_prev * h_next));
    let root = match disc.sign_within(&b.square()) {
        Sign::Negative => {
            return Err(Error::NegativeRadicand { what: "v-root discriminant", n: n as u64, value: disc.to_string() })
        }
        Sign::Zero | Sign::NearZero => Scalar::zero(),
        Sign::Positive => disc.sqrt(prec).expect("positive"),
    };
    let denom = &Scalar::from_int(2) * h_next;
    Ok(VRoots {
        n,
        x: x.clone(),
        v1: &(&b - &root) / &denom,
        v2: &(&b + &root) / &denom,
        discriminant: disc,
    })
}

/// `a ≥ b` up to `rel_tol · max(|a|, |b|)`; exact for rationals.
fn geq_within(a: &Scalar, b: &Scalar, rel_tol: f64) -> bool {
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    (a - b).sign_with_tol(rel_tol, &scale).is_nonnegative()
}

fn x_scalar(x: &Rational) -> Scalar {
    Scalar::Rational(x.clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub n: usize,
    pub x: String,
    pub kind: &'static str,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotoneReport {
    pub h: String,
    pub n_max: usize,
    pub points: usize,
    /// Smallest `v_{n,2}(x) − v_{n+1,2}(x)` and where it occurs.
    pub worst_margin: Option<String>,
    pub worst_at: Option<(usize, String)>,
    pub failures: Vec<Violation>,
    pub passed: bool,
}

/// `v_{n,2}(x) ≥ v_{n+1,2}(x)` for `1 ≤ n ≤ n_max` and `x ≥ 0` on the grid.
pub fn check_v_monotone(
    h: &ArithmeticFunctionSpec,
    n_max: usize,
    x_grid: &[Rational],
    prec: Precision,
    rel_tol: f64,
) -> Result<MonotoneReport> {
    let fam = TuranFamily::new(h, n_max, prec)?;
    check_v_monotone_on(&fam, x_grid, rel_tol)
}

pub fn check_v_monotone_on(fam: &TuranFamily, x_grid: &[Rational], rel_tol: f64) -> Result<MonotoneReport> {
    let n_max = fam.n_max();
    let mut failures = Vec::new();
    let mut worst: Option<(Scalar, usize, String)> = None;
    let mut points = 0;
    for x in x_grid.iter().filter(|x| x.cmp0() != std::cmp::Ordering::Less) {
        let xs = x_scalar(x);
        let mut prev = match fam.v_roots(1, &xs) {
            Ok(v) => Some(v.v2),
            Err(e) => {
                failures.push(discriminant_violation(1, x, e)?);
                None
            }
        };
        for n in 1..=n_max {
            let next = match fam.v_roots(n + 1, &xs) {
                Ok(v) => Some(v.v2),
                Err(e) => {
                    failures.push(discriminant_violation(n + 1, x, e)?);
                    None
                }
            };
            if let (Some(a), Some(b)) = (&prev, &next) {
                points += 1;
                let margin = a - b;
                if worst.as_ref().is_none_or(|(w, _, _)| margin < *w) {
                    worst = Some((margin.clone(), n, decimal_string(x)));
                }
                if !geq_within(a, b, rel_tol) {
                    failures.push(Violation {
                        n,
                        x: decimal_string(x),
                        kind: "v-increasing",
                        value: margin.to_string(),
                    });
                }
            }
            prev = next;
        }
    }
    Ok(MonotoneReport {
        h: fam.h.to_string(),
        n_max,
        points,
        worst_margin: worst.as_ref().map(|(m, _, _)| m.to_string()),
        worst_at: worst.map(|(_, n, x)| (n, x)),
        passed: failures.is_empty(),
        failures,
    })
}

fn discriminant_violation(n: usize, x: &Rational, e: Error) -> Result<Violation> {
    match e {
        Error::NegativeRadicand { value, .. } => {
            Ok(Violation { n, x: decimal_string(x), kind: "negative-discriminant", value })
        }
        other => Err(other),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub x: String,
    pub v2: Scalar,
    pub ratio: Scalar,
    /// `ratio − v2`
    pub margin: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub h: String,
    pub n_max: usize,
    pub rows: Vec<BoundRow>,
    /// `P_2(x)/P_1(x) = v_{1,2}(x)` at every grid point.
    pub base_equality: bool,
    pub failures: Vec<Violation>,
    pub passed: bool,
}

/// `v_{n,2}(x) ≤ P_n(x)/P_{n−1}(x)` for `2 ≤ n ≤ n_max` and `x > 0` on the grid.
pub fn check_ratio_bound(
    h: &ArithmeticFunctionSpec,
    n_max: usize,
    x_grid: &[Rational],
    prec: Precision,
    rel_tol: f64,
) -> Result<BoundReport> {
    let fam = TuranFamily::new(h, n_max, prec)?;
    check_ratio_bound_on(&fam, x_grid, rel_tol)
}

pub fn check_ratio_bound_on(fam: &TuranFamily, x_grid: &[Rational], rel_tol: f64) -> Result<BoundReport> {
    let n_max = fam.n_max();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut base_equality = true;
    for x in x_grid.iter().filter(|x| x.cmp0() == std::cmp::Ordering::Greater) {
        let xs = x_scalar(x);
        let values: Vec<Scalar> = (0..=n_max).map(|n| fam.p(n, &xs)).collect();
        let ratio_of = |n: usize| -> Result<Scalar> {
            values[n]
                .checked_div(&values[n - 1])
                .ok_or_else(|| Error::ZeroAnomaly(format!("P_{}({}) = 0 for x > 0", n - 1, decimal_string(x))))
        };
        if n_max >= 2 {
            let base = fam.v_roots(1, &xs)?.v2;
            let r2 = ratio_of(2)?;
            let scale = r2.abs();
            if !(&r2 - &base).sign_with_tol(rel_tol, &scale).is_zeroish() {
                base_equality = false;
                failures.push(Violation {
                    n: 1,
                    x: decimal_string(x),
                    kind: "base-case",
                    value: (&r2 - &base).to_string(),
                });
            }
        }
        for n in 2..=n_max {
            let ratio = ratio_of(n)?;
            let v2 = match fam.v_roots(n, &xs) {
                Ok(v) => v.v2,
                Err(e) => {
                    failures.push(discriminant_violation(n, x, e)?);
                    continue;
                }
            };
            let margin = &ratio - &v2;
            if !geq_within(&ratio, &v2, rel_tol) {
                failures.push(Violation { n, x: decimal_string(x), kind: "ratio-below-v2", value: margin.to_string() });
            }
            rows.push(BoundRow { n, x: decimal_string(x), v2, ratio, margin });
        }
    }
    Ok(BoundReport {
        h: fam.h.to_string(),
        n_max,
        rows,
        base_equality,
        passed: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DCriterionRow {
    pub n: usize,
    pub d: Scalar,
    pub v_n: Scalar,
    pub v_next: Scalar,
    /// `D(n) ≤ 0` within tolerance
    pub d_nonpositive: bool,
    /// `v_{n+1,2}(0) ≤ v_{n,2}(0)` within tolerance
    pub v_decreasing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DCriterionReport {
    pub h: String,
    pub rows: Vec<DCriterionRow>,
    pub consistent: bool,
}

/// Compares the sign of `D(n)` with the direct comparison of
/// `v_{n,2}(0)` and `v_{n+1,2}(0)` for `1 ≤ n ≤ n_max`.
pub fn d_criterion_vs_v(
    h: &ArithmeticFunctionSpec,
    n_max: usize,
    prec: Precision,
    rel_tol: f64,
) -> Result<DCriterionReport> {
    let hv = backend_values(h, n_max as u64 + 2, prec)?;
    let zero = Scalar::zero();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let d = h.d_criterion(n as u64, prec)?;
        let v_n = v_roots_from_values(&hv, n, &zero, prec)?.v2;
        let v_next = v_roots_from_values(&hv, n + 1, &zero, prec)?.v2;
        let d_nonpositive = d.sign_with_tol(rel_tol, &Scalar::one()).is_nonpositive();
        let v_decreasing = geq_within(&v_n, &v_next, rel_tol);
        rows.push(DCriterionRow { n, d, v_n, v_next, d_nonpositive, v_decreasing });
    }
    let consistent = rows.iter().all(|r| r.d_nonpositive == r.v_decreasing);
    Ok(DCriterionReport { h: h.to_string(), rows, consistent })
}

#[derive(Clone, Debug, Serialize)]
pub struct TuranPoint {
    pub n: usize,
    pub x: String,
    pub t: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeXFindings {
    pub points: usize,
    /// Points with `T_n(x) < 0` beyond tolerance; reported, never asserted.
    pub negative: Vec<TuranPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TuranReport {
    pub h: String,
    pub n_min: usize,
    pub n_max: usize,
    pub x_grid: Vec<String>,
    pub points: Vec<TuranPoint>,
    /// Smallest `T_n(x) / max(P_n², |P_{n−1}P_{n+1}|)` over nonzero scales.
    pub minimum_relative: Option<f64>,
    /// `T_n(0) = 0` exactly for every `n`.
    pub zero_row_exact: bool,
    pub failures: Vec<Violation>,
    pub negative_x: Option<NegativeXFindings>,
    pub passed: bool,
}

/// `T_n(x) ≥ −rel_tol · scale` for `2 ≤ n ≤ n_max` and `x ≥ 0` on the grid.
/// With `allow_negative_x`, the mirrored points `−x` are also evaluated and
/// listed without affecting the verdict. Negative grid entries are only
/// accepted together with that flag.
pub fn turan_sweep(
    h: &ArithmeticFunctionSpec,
    n_max: usize,
    x_grid: &[Rational],
    allow_negative_x: bool,
    prec: Precision,
    rel_tol: f64,
) -> Result<TuranReport> {
    let fam = TuranFamily::new(h, n_max, prec)?;
    turan_sweep_on(&fam, x_grid, allow_negative_x, rel_tol)
}

pub fn turan_sweep_on(
    fam: &TuranFamily,
    x_grid: &[Rational],
    allow_negative_x: bool,
    rel_tol: f64,
) -> Result<TuranReport> {
    let n_max = fam.n_max();
    let has_negative = x_grid.iter().any(|x| x.cmp0() == std::cmp::Ordering::Less);
    if has_negative && !allow_negative_x {
        return Err(Error::InvalidGrid("negative x requires the negative-x exploration flag".into()));
    }
    let nonneg: Vec<&Rational> = x_grid.iter().filter(|x| x.cmp0() != std::cmp::Ordering::Less).collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut minimum_relative: Option<f64> = None;
    let mut zero_row_exact = true;
    for x in &nonneg {
        let xs = x_scalar(x);
        for n in 2..=n_max {
            let (t, scale) = fam.turan_t(n, &xs);
            if x.cmp0() == std::cmp::Ordering::Equal && !t.is_zero() {
                zero_row_exact = false;
            }
            if !scale.is_zero() {
                let rel = (&t / &scale).to_f64();
                minimum_relative = Some(minimum_relative.map_or(rel, |m| m.min(rel)));
            }
            if t.sign_with_tol(rel_tol, &scale) == Sign::Negative {
                failures.push(Violation { n, x: decimal_string(x), kind: "turan-negative", value: t.to_string() });
            }
            points.push(TuranPoint { n, x: decimal_string(x), t });
        }
    }
    let negative_x = if allow_negative_x {
        let mut mirrored: Vec<Rational> = x_grid
            .iter()
            .filter(|x| x.cmp0() != std::cmp::Ordering::Equal)
            .map(|x| if x.cmp0() == std::cmp::Ordering::Less { x.clone() } else { Rational::from(-x) })
            .collect();
        mirrored.sort();
        mirrored.dedup();
        let mut negative = Vec::new();
        let mut count = 0;
        for x in &mirrored {
            let xs = x_scalar(x);
            for n in 2..=n_max {
                count += 1;
                let (t, scale) = fam.turan_t(n, &xs);
                if t.sign_with_tol(rel_tol, &scale) == Sign::Negative {
                    negative.push(TuranPoint { n, x: decimal_string(x), t });
                }
            }
        }
        Some(NegativeXFindings { points: count, negative })
    } else {
        None
    };
    Ok(TuranReport {
        h: fam.h.to_string(),
        n_min: 2,
        n_max,
        x_grid: nonneg.iter().map(|x| decimal_string(x)).collect(),
        points,
        minimum_relative,
        zero_row_exact,
        passed: failures.is_empty() && zero_row_exact,
        failures,
        negative_x,
    })
}

/// CSV with columns `n,x,T`.
pub fn turan_csv(report: &TuranReport) -> String {
    let mut out = String::from("n,x,T\n");
    for p in &report.points {
        out.push_str(&format!("{},{},{}\n", p.n, p.x, p.t.to_repr_string()));
    }
    out
}

/// CSV with columns `n,x,v2,ratio,margin`.
pub fn bounds_csv(report: &BoundReport) -> String {
    let mut out = String::from("n,x,v2,ratio,margin\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.x,
            r.v2.to_repr_string(),
            r.ratio.to_repr_string(),
            r.margin.to_repr_string()
        ));
    }
    out
}
