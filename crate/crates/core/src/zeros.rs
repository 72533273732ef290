//! Zeros of `P_n^{id,h}`.
//!
//! `P_n = x · q_{n−1} / ∏h`, so the nonzero zeros are the eigenvalues of the
//! Jacobi matrix of the `q`-recurrence. Eigenvalues are bracketed by
//! bisection on the Sturm count of the symmetric tridiagonal matrix; an
//! independent isolator on exact rational polynomials serves as the oracle.

use std::cmp::Ordering;

use rug::{Float, Rational};
use serde::Serialize;

use crate::arithfn::ArithmeticFunctionSpec;
use crate::classical::laguerre;
use crate::error::{Error, Result};
use crate::favard::q_recurrence;
use crate::grid::decimal_string;
use crate::poly::DensePolynomial;
use crate::scalar::{Precision, Scalar};

pub const DEFAULT_TOL: f64 = 1e-12;

/// Symmetric tridiagonal matrix with diagonal `d_i = c_i` and off-diagonal
/// `e_i = √λ_{i+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct JacobiMatrix {
    pub order: usize,
    pub diag: Vec<Scalar>,
    pub off: Vec<Scalar>,
    /// `e_i²`, kept exact for the Sturm count.
    #[serde(skip)]
    pub off_sq: Vec<Scalar>,
}

/// `d_i = −2h(i)`, `e_i² = h(i)h(i+1)`; rejects any `λ_i ≤ 0`, `2 ≤ i ≤ N`.
pub fn jacobi_from_h(h: &ArithmeticFunctionSpec, order: usize, prec: Precision) -> Result<JacobiMatrix> {
    if order == 0 {
        return Err(Error::Insufficient("Jacobi matrix needs order >= 1".into()));
    }
    let rec = q_recurrence(h, order, prec)?;
    let off_sq: Vec<Scalar> = rec.lambda[1..].to_vec();
    if let Some((i, v)) = off_sq.iter().enumerate().find(|(_, v)| !v.is_positive()) {
        return Err(Error::NonPositiveLambda { n: i + 2, value: v.to_string() });
    }
    let off = off_sq.iter().map(|v| v.sqrt(prec).expect("positive")).collect();
    Ok(JacobiMatrix { order, diag: rec.c, off, off_sq })
}

/// Eigenvalue `value` certified to lie in `[lo, hi]`, the only one there.
#[derive(Clone, Debug, Serialize)]
pub struct EigenBracket {
    pub lo: Scalar,
    pub hi: Scalar,
    pub value: Scalar,
}

struct SturmCounter {
    d: Vec<Float>,
    e2: Vec<Float>,
    pivmin: Float,
    prec: u32,
}

impl SturmCounter {
    fn new(j: &JacobiMatrix, prec: u32) -> Self {
        let d: Vec<Float> = j.diag.iter().map(|v| v.to_float(prec)).collect();
        let e2: Vec<Float> = j.off_sq.iter().map(|v| v.to_float(prec)).collect();
        let max_e2 = e2.iter().fold(Float::with_val(prec, 1), |m, v| if *v > m { v.clone() } else { m });
        let pivmin = max_e2 * Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
        SturmCounter { d, e2, pivmin, prec }
    }

    /// Number of eigenvalues strictly below `mu` (LDLᵀ pivot signs).
    fn count_below(&self, mu: &Float) -> usize {
        let mut count = 0;
        let mut q = Float::with_val(self.prec, &self.d[0] - mu);
        for i in 0..self.d.len() {
            if i > 0 {
                let t = Float::with_val(self.prec, &self.e2[i - 1] / &q);
                q = Float::with_val(self.prec, &self.d[i] - mu) - t;
            }
            if q.is_zero() {
                q = Float::with_val(self.prec, -&self.pivmin);
            }
            if q.is_sign_negative() {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval, widened by one unit on each side.
    fn bounds(&self, off: &[Float]) -> (Float, Float) {
        let n = self.d.len();
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for i in 0..n {
            let mut r = Float::with_val(self.prec, 0);
            if i > 0 {
                r += off[i - 1].clone().abs();
            }
            if i + 1 < n {
                r += off[i].clone().abs();
            }
            let a = Float::with_val(self.prec, &self.d[i] - &r);
            let b = Float::with_val(self.prec, &self.d[i] + &r);
            lo = Some(match lo {
                Some(l) if l < a => l,
                _ => a,
            });
            hi = Some(match hi {
                Some(h) if h > b => h,
                _ => b,
            });
        }
        (lo.unwrap() - 1u32, hi.unwrap() + 1u32)
    }
}

/// All eigenvalues in ascending order, each bracketed to width `≤ tol` and
/// certified simple: exactly one eigenvalue lies in its bracket.
pub fn eigenvalues(j: &JacobiMatrix, tol: f64, prec: Precision) -> Result<Vec<EigenBracket>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidNumber(format!("tolerance {tol}")));
    }
    let p = prec.bits();
    let counter = SturmCounter::new(j, p);
    let off: Vec<Float> = j.off.iter().map(|v| v.to_float(p)).collect();
    let (glo, ghi) = counter.bounds(&off);
    let tol_f = Float::with_val(p, tol);
    let mut out = Vec::with_capacity(j.order);
    for k in 0..j.order {
        let mut lo = glo.clone();
        let mut hi = ghi.clone();
        while Float::with_val(p, &hi - &lo) > tol_f {
            let mid = Float::with_val(p, &lo + &hi) / 2u32;
            if counter.count_below(&mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let inside = counter.count_below(&hi) - counter.count_below(&lo);
        if inside != 1 {
            return Err(Error::Multiplicity {
                at: Scalar::Float(lo.clone()).to_repr_string(),
                count: inside,
                width: Scalar::Float(Float::with_val(p, &hi - &lo)).to_repr_string(),
            });
        }
        let value = Float::with_val(p, &lo + &hi) / 2u32;
        out.push(EigenBracket { lo: Scalar::Float(lo), hi: Scalar::Float(hi), value: Scalar::Float(value) });
    }
    Ok(out)
}

/// Zeros of `P_n^{id,h}` ascending: `eig(J_{n−1}) ∪ {0}`.
pub fn zeros_of_p(h: &ArithmeticFunctionSpec, n: usize, tol: f64, prec: Precision) -> Result<Vec<Scalar>> {
    if n == 0 {
        return Err(Error::Insufficient("P_0 has no zeros".into()));
    }
    let mut zeros = if n == 1 {
        Vec::new()
    } else {
        let j = jacobi_from_h(h, n - 1, prec)?;
        eigenvalues(&j, tol, prec)?.into_iter().map(|b| b.value).collect()
    };
    zeros.push(Scalar::zero());
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(zeros)
}

/// Root isolated to the half-open interval `(lo, hi]`, or `lo = hi` when the
/// root was hit exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootBracket {
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl RootBracket {
    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }
}

struct SturmChain {
    seq: Vec<Vec<Rational>>,
}

impl SturmChain {
    fn new(p: &DensePolynomial) -> Result<Self> {
        let to_rat = |q: &DensePolynomial| -> Result<Vec<Rational>> {
            q.coeffs().iter().map(|c| c.as_rational().cloned().ok_or(Error::NotRational)).collect()
        };
        let normalize = |q: DensePolynomial| -> DensePolynomial {
            match q.leading() {
                Some(l) => q.scale(&l.abs().recip().unwrap()),
                None => q,
            }
        };
        let mut polys = vec![normalize(p.clone()), normalize(p.derivative())];
        loop {
            let n = polys.len();
            if polys[n - 1].degree().unwrap_or(0) == 0 {
                break;
            }
            let (_, r) = polys[n - 2].div_rem(&polys[n - 1]);
            if r.is_zero() {
                break;
            }
            polys.push(normalize(-&r));
        }
        Ok(SturmChain { seq: polys.iter().map(to_rat).collect::<Result<_>>()? })
    }

    fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in &self.seq {
            let sign = Self::eval(s, x).cmp0();
            if sign == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && sign != last {
                count += 1;
            }
            last = sign;
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Real roots of a squarefree rational polynomial, ascending, each to width
/// `≤ tol`.
pub fn sturm_roots(p: &DensePolynomial, tol: f64) -> Result<Vec<RootBracket>> {
    if !p.is_rational() {
        return Err(Error::NotRational);
    }
    let Some(deg) = p.degree() else {
        return Err(Error::Insufficient("zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let g = p.gcd(&p.derivative());
    if let Some(d) = g.degree().filter(|&d| d > 0) {
        return Err(Error::NonSquarefree(d));
    }
    let tol = Rational::from_f64(tol).filter(|t| t.cmp0() == Ordering::Greater).ok_or_else(|| {
        Error::InvalidNumber(format!("tolerance {tol}"))
    })?;
    let lead = p.leading().unwrap().as_rational().unwrap().clone();
    let bound = p.coeffs()[..deg]
        .iter()
        .map(|c| Rational::from(c.as_rational().unwrap() / &lead).abs())
        .fold(Rational::new(), |m, v| if v > m { v } else { m })
        + 1u32;
    let chain = SturmChain::new(p)?;
    let coeffs = chain.seq[0].clone();

    let mut roots = Vec::new();
    let mut stack = vec![(Rational::from(-&bound), bound)];
    while let Some((a, b)) = stack.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 => roots.push(refine(&chain, &coeffs, a, b, &tol)),
            _ => {
                let mid = Rational::from(&a + &b) / 2u32;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    roots.sort_by(|x, y| x.hi.cmp(&y.hi));
    Ok(roots)
}

fn refine(chain: &SturmChain, coeffs: &[Rational], mut a: Rational, mut b: Rational, tol: &Rational) -> RootBracket {
    if SturmChain::eval(coeffs, &b).cmp0() == Ordering::Equal {
        return RootBracket { lo: b.clone(), hi: b };
    }
    while Rational::from(&b - &a) > *tol {
        let mid = Rational::from(&a + &b) / 2u32;
        if SturmChain::eval(coeffs, &mid).cmp0() == Ordering::Equal {
            return RootBracket { lo: mid.clone(), hi: mid };
        }
        if chain.count(&a, &mid) == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    RootBracket { lo: a, hi: b }
}

/// True iff each open gap between consecutive entries of `b` holds exactly
/// one entry of `a`. Both inputs sorted ascending, `|b| = |a| + 1`.
pub fn interlacing_check(a: &[Scalar], b: &[Scalar]) -> Result<bool> {
    if b.len() != a.len() + 1 {
        return Err(Error::SizeMismatch { expected: a.len() + 1, got: b.len() });
    }
    Ok(b.windows(2).all(|w| a.iter().filter(|z| **z > w[0] && **z < w[1]).count() == 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroTrajectory {
    pub n: usize,
    pub s: Vec<String>,
    /// Zeros of `P_n^{id,h_s}` ascending, one row per `s`.
    pub zeros: Vec<Vec<Scalar>>,
    /// Largest `|z_i(s_{k+1}) − z_i(s_k)|` over indices and adjacent grid points.
    pub max_displacement: f64,
    /// Smallest gap between adjacent zeros over all `s`.
    pub min_gap: f64,
    /// `max_displacement ≤ MAX_STEP_DISPLACEMENT`; informational only.
    pub continuous: bool,
}

/// Empirical bound on zero movement per grid step of 0.01.
pub const MAX_STEP_DISPLACEMENT: f64 = 0.2;

/// Zeros of `P_n^{id,h_s}`, `h_s(k) = k^s`, for every `s` on the grid.
pub fn trajectory(n: usize, s_grid: &[Rational], tol: f64, prec: Precision) -> Result<ZeroTrajectory> {
    if n < 2 {
        return Err(Error::Insufficient("trajectory needs n >= 2".into()));
    }
    if s_grid.iter().any(|s| s.cmp0() == Ordering::Less || *s > 1) {
        return Err(Error::InvalidGrid("s values must lie in [0, 1]".into()));
    }
    let zeros: Vec<Vec<Scalar>> = s_grid
        .iter()
        .map(|s| zeros_of_p(&ArithmeticFunctionSpec::power(s.clone()), n, tol, prec))
        .collect::<Result<_>>()?;
    let mut max_displacement: f64 = 0.0;
    for w in zeros.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            max_displacement = max_displacement.max((a - b).abs().to_f64());
        }
    }
    let min_gap = zeros
        .iter()
        .flat_map(|row| row.windows(2).map(|w| (&w[1] - &w[0]).to_f64()))
        .fold(f64::INFINITY, f64::min);
    Ok(ZeroTrajectory {
        n,
        s: s_grid.iter().map(decimal_string).collect(),
        zeros,
        max_displacement,
        min_gap,
        continuous: max_displacement <= MAX_STEP_DISPLACEMENT,
    })
}

/// `2cos(kπ/n) − 2`, `k = 1..n−1`, ascending, and 0: zeros of `P_n^{id,1}`.
pub fn chebyshev_closed_form_zeros(n: usize, prec: Precision) -> Vec<Scalar> {
    let p = prec.bits() + 32;
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let mut out: Vec<Scalar> = (1..n)
        .rev()
        .map(|k| {
            let angle = Float::with_val(p, &pi * k as u32) / n as u32;
            let v = Float::with_val(p, angle.cos() * 2u32) - 2u32;
            Scalar::Float(Float::with_val(prec.bits(), v))
        })
        .collect();
    out.push(Scalar::zero());
    out
}

/// Zeros of `P_n^{id,id} = (x/n) L_{n−1}^{(1)}(−x)` isolated on the exact
/// rational polynomial.
pub fn laguerre_oracle_zeros(n: usize, tol: f64) -> Result<Vec<Scalar>> {
    let p = &DensePolynomial::x() * &laguerre(n - 1, &Rational::from(1)).reflect();
    Ok(sturm_roots(&p, tol)?.iter().map(|r| Scalar::Rational(r.midpoint())).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct EndpointCheck {
    /// Max error at `s = 0` against the closed-form Chebyshev zeros.
    pub chebyshev_error: Option<f64>,
    /// Max error at `s = 1` against the Laguerre-derived exact oracle.
    pub laguerre_error: Option<f64>,
    pub passed: bool,
}

/// Compares the rows at `s = 0` and `s = 1`, when present, with the
/// independent references.
pub fn check_endpoints(traj: &ZeroTrajectory, s_grid: &[Rational], tol: f64, max_error: f64, prec: Precision) -> Result<EndpointCheck> {
    let max_err = |a: &[Scalar], b: &[Scalar]| -> f64 {
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(b).map(|(x, y)| (x - y).abs().to_f64()).fold(0.0, f64::max)
    };
    let row = |target: u32| s_grid.iter().position(|s| *s == target).map(|i| &traj.zeros[i]);
    let chebyshev_error = row(0).map(|z| max_err(z, &chebyshev_closed_form_zeros(traj.n, prec)));
    let laguerre_error = match row(1) {
        Some(z) => Some(max_err(z, &laguerre_oracle_zeros(traj.n, tol)?)),
        None => None,
    };
    let passed = chebyshev_error.is_none_or(|e| e <= max_error) && laguerre_error.is_none_or(|e| e <= max_error);
    Ok(EndpointCheck { chebyshev_error, laguerre_error, passed })
}

/// CSV with columns `s,index,zero`.
pub fn trajectory_csv(traj: &ZeroTrajectory) -> String {
    let mut out = String::from("s,index,zero\n");
    for (s, row) in traj.s.iter().zip(&traj.zeros) {
        for (i, z) in row.iter().enumerate() {
            out.push_str(&format!("{s},{i},{}\n", z.to_repr_string()));
        }
    }
    out
}

/// CSV with columns `n,index,zero`.
pub fn zeros_csv(rows: &[(usize, Vec<Scalar>)]) -> String {
    let mut out = String::from("n,index,zero\n");
    for (n, row) in rows {
        for (i, z) in row.iter().enumerate() {
            out.push_str(&format!("{n},{i},{}\n", z.to_repr_string()));
        }
    }
    out
}
