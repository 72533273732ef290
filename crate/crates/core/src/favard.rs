//! Monic three-term recurrences, their moment functionals and Hankel
//! determinants.
//!
//! A recurrence `P_n = (x − c_n) P_{n−1} − λ_n P_{n−2}` with `P_{−1} = 0`,
//! `P_0 = 1` determines a moment functional `Λ` up to the value `Λ(1) = μ_0`.
//! `λ_1` never enters the polynomials, so `μ_0` is supplied separately
//! (default 1) instead of being read off `λ_1`.

use rug::Integer;
use serde::Serialize;

use crate::arithfn::ArithmeticFunctionSpec;
use crate::error::{Error, Result};
use crate::poly::{backend_values, DensePolynomial, GeneratedFamily};
use crate::scalar::{Precision, Scalar, Sign};

/// Coefficients `c_1..c_N` and `λ_1..λ_N`, stored zero-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreeTermRecurrence {
    pub c: Vec<Scalar>,
    pub lambda: Vec<Scalar>,
}

impl ThreeTermRecurrence {
    pub fn new(c: Vec<Scalar>, lambda: Vec<Scalar>) -> Result<Self> {
        if c.len() != lambda.len() {
            return Err(Error::SizeMismatch { expected: c.len(), got: lambda.len() });
        }
        Ok(ThreeTermRecurrence { c, lambda })
    }

    /// Constant coefficients `c_n ≡ c`, `λ_n ≡ λ` for `n = 1..=len`.
    pub fn constant(c: Scalar, lambda: Scalar, len: usize) -> Self {
        ThreeTermRecurrence { c: vec![c; len], lambda: vec![lambda; len] }
    }

    /// Builds `c_n = c(n)`, `λ_n = λ(n)` for `n = 1..=len`.
    pub fn from_fn(len: usize, c: impl Fn(usize) -> Scalar, lambda: impl Fn(usize) -> Scalar) -> Self {
        ThreeTermRecurrence {
            c: (1..=len).map(&c).collect(),
            lambda: (1..=len).map(&lambda).collect(),
        }
    }

    /// Number of `(c_n, λ_n)` pairs, i.e. the horizon `N`.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `c_n`, one-based.
    pub fn c_n(&self, n: usize) -> &Scalar {
        &self.c[n - 1]
    }

    /// `λ_n`, one-based.
    pub fn lambda_n(&self, n: usize) -> &Scalar {
        &self.lambda[n - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    PositiveDefinite,
    QuasiDefinite,
    Degenerate,
}

/// Verdict from a finite horizon: only `λ_2..λ_N` (or `Δ_0..Δ_N`) were seen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Definiteness,
    pub horizon: usize,
    /// Some inspected value was within float tolerance of zero.
    pub uncertain: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentSequence {
    pub mu: Vec<Scalar>,
}

impl MomentSequence {
    pub fn new(mu: Vec<Scalar>) -> Self {
        MomentSequence { mu }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// `Λ(p) = Σ_k p_k μ_k`.
    pub fn apply(&self, p: &DensePolynomial) -> Result<Scalar> {
        if p.coeffs().len() > self.mu.len() {
            return Err(Error::Insufficient(format!(
                "need moments through degree {}, have {}",
                p.coeffs().len() - 1,
                self.mu.len()
            )));
        }
        Ok(p.coeffs()
            .iter()
            .zip(&self.mu)
            .fold(Scalar::zero(), |acc, (c, m)| &acc + &(c * m)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelReport {
    /// `Δ_0..Δ_N`
    pub determinants: Vec<Scalar>,
    pub verdict: Definiteness,
    pub horizon: usize,
    /// Per determinant: float value within tolerance of zero.
    pub uncertain: Vec<bool>,
}

/// `c_n = −2h(n)`, `λ_n = h(n−1)h(n)` for `n = 1..=n_max` (so `λ_1 = 0`).
pub fn q_recurrence(h: &ArithmeticFunctionSpec, n_max: usize, prec: Precision) -> Result<ThreeTermRecurrence> {
    let hv = backend_values(h, n_max as u64, prec)?;
    let minus_two = Scalar::from_int(-2);
    Ok(ThreeTermRecurrence {
        c: (1..=n_max).map(|n| &minus_two * &hv[n]).collect(),
        lambda: (1..=n_max).map(|n| &hv[n - 1] * &hv[n]).collect(),
    })
}

/// `q_n = (∏_{k=1}^{n+1} h(k) / x) · P_{n+1}^{id,h}`.
pub fn q_from_family(
    h: &ArithmeticFunctionSpec,
    family: &GeneratedFamily,
    n: usize,
    prec: Precision,
) -> Result<DensePolynomial> {
    family.requires_identity_g()?;
    if family.h != *h {
        return Err(Error::FamilyMismatch(format!("family was generated for h = {}, not {h}", family.h)));
    }
    let p = family
        .get(n + 1)
        .ok_or_else(|| Error::Insufficient(format!("family stops at P_{}, need P_{}", family.max_n(), n + 1)))?;
    let hv = backend_values(h, n as u64 + 1, prec)?;
    let prod = hv[1..].iter().fold(Scalar::one(), |acc, v| &acc * v);
    Ok(p.div_x()?.scale(&prod))
}

/// `P_0..P_N` from the monic recurrence.
pub fn monic_from_recurrence(rec: &ThreeTermRecurrence, n_max: usize) -> Result<Vec<DensePolynomial>> {
    if n_max > rec.len() {
        return Err(Error::Insufficient(format!("recurrence has {} terms, need {n_max}", rec.len())));
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = DensePolynomial::zero();
    let mut cur = DensePolynomial::one();
    out.push(cur.clone());
    for n in 1..=n_max {
        let shifted = &cur.mul_x() - &cur.scale(rec.c_n(n));
        let next = &shifted - &prev.scale(rec.lambda_n(n));
        prev = cur;
        cur = next;
        out.push(cur.clone());
    }
    Ok(out)
}

/// `μ_0..μ_N` from `Λ(P_n) = 0` for `1 ≤ n ≤ N`.
pub fn moments_from_recurrence(rec: &ThreeTermRecurrence, n_max: usize, mu0: Scalar) -> Result<MomentSequence> {
    let polys = monic_from_recurrence(rec, n_max)?;
    let mut mu = Vec::with_capacity(n_max + 1);
    mu.push(mu0);
    for p in polys.iter().skip(1) {
        let n = p.degree().expect("monic");
        let partial = (0..n).fold(Scalar::zero(), |acc, j| &acc + &(&p.coeff(j) * &mu[j]));
        mu.push(-partial);
    }
    Ok(MomentSequence { mu })
}

/// Leading principal minors `Δ_n = det(μ_{i+j})_{i,j=0..n}` for `n = 0..=N`.
///
/// Rational moments go through fraction-free elimination; float moments are
/// widened to twice the working precision first and each determinant is
/// flagged when it is within tolerance of zero.
pub fn hankel_determinants(mu: &MomentSequence, n_max: usize, prec: Precision) -> Result<HankelReport> {
    if mu.len() < 2 * n_max + 1 {
        return Err(Error::Insufficient(format!(
            "Hankel order {n_max} needs {} moments, have {}",
            2 * n_max + 1,
            mu.len()
        )));
    }
    let exact = mu.mu.iter().all(Scalar::is_rational);
    let wide = prec.doubled();
    let moments: Vec<Scalar> = if exact {
        mu.mu.clone()
    } else {
        mu.mu.iter().map(|m| Scalar::Float(m.to_float(wide.bits()))).collect()
    };

    let mut determinants = Vec::with_capacity(n_max + 1);
    let mut uncertain = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let size = n + 1;
        let matrix: Vec<Vec<Scalar>> =
            (0..size).map(|i| (0..size).map(|j| moments[i + j].clone()).collect()).collect();
        let det = bareiss_determinant(matrix.clone());
        let flag = if exact {
            false
        } else {
            let bound = matrix.iter().fold(Scalar::one(), |acc, row| {
                &acc * &row.iter().fold(Scalar::zero(), |s, v| &s + &v.abs())
            });
            det.sign_within(&bound) == Sign::NearZero
        };
        determinants.push(det);
        uncertain.push(flag);
    }

    let verdict = if determinants.iter().zip(&uncertain).all(|(d, u)| !u && d.is_positive()) {
        Definiteness::PositiveDefinite
    } else if determinants.iter().zip(&uncertain).all(|(d, u)| !u && !d.is_zero()) {
        Definiteness::QuasiDefinite
    } else {
        Definiteness::Degenerate
    };
    Ok(HankelReport { determinants, verdict, horizon: n_max, uncertain })
}

/// Fraction-free Gaussian elimination with row pivoting on exact zeros.
fn bareiss_determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    let mut sign_flip = false;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Scalar::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// `p̃_n(x) = a^{−n} p_n(a x + b)`: `c̃_n = (c_n − b)/a`, `λ̃_n = λ_n / a²`.
pub fn affine_transform_recurrence(rec: &ThreeTermRecurrence, a: &Scalar, b: &Scalar) -> Result<ThreeTermRecurrence> {
    let inv_a = a.recip().ok_or(Error::ZeroScale)?;
    let inv_a2 = inv_a.square();
    Ok(ThreeTermRecurrence {
        c: rec.c.iter().map(|c| &(c - b) * &inv_a).collect(),
        lambda: rec.lambda.iter().map(|l| l * &inv_a2).collect(),
    })
}

/// `μ̃_n = a^{−n} Σ_k binom(n,k) (−b)^{n−k} μ_k`.
pub fn affine_transform_moments(mu: &MomentSequence, a: &Scalar, b: &Scalar) -> Result<MomentSequence> {
    let inv_a = a.recip().ok_or(Error::ZeroScale)?;
    let minus_b = -b;
    let mut out = Vec::with_capacity(mu.len());
    let mut inv_a_pow = Scalar::one();
    for n in 0..mu.len() {
        let mut sum = Scalar::zero();
        for (k, mu_k) in mu.mu.iter().enumerate().take(n + 1) {
            let binom = Scalar::from_integer(Integer::from(Integer::binomial_u(n as u32, k as u32)));
            let term = &(&binom * &minus_b.pow_u((n - k) as u32)) * mu_k;
            sum = &sum + &term;
        }
        out.push(&sum * &inv_a_pow);
        inv_a_pow = &inv_a_pow * &inv_a;
    }
    Ok(MomentSequence { mu: out })
}

/// Applies the same affine change of variable to a recurrence and its moments.
pub fn affine_transform(
    rec: &ThreeTermRecurrence,
    mu: &MomentSequence,
    a: &Scalar,
    b: &Scalar,
) -> Result<(ThreeTermRecurrence, MomentSequence)> {
    Ok((affine_transform_recurrence(rec, a, b)?, affine_transform_moments(mu, a, b)?))
}

/// Orthonormal recurrence `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n−1}`
/// to monic form: `c_n = b_{n−1}`, `λ_n = a_{n−1}²`. Both slices start at index 0.
pub fn orthonormal_to_monic(a_seq: &[Scalar], b_seq: &[Scalar]) -> Result<ThreeTermRecurrence> {
    if let Some((index, value)) = a_seq.iter().enumerate().find(|(_, a)| !a.is_positive()) {
        return Err(Error::NonPositiveA { index, value: value.to_string() });
    }
    let len = a_seq.len().min(b_seq.len());
    Ok(ThreeTermRecurrence {
        c: b_seq[..len].to_vec(),
        lambda: a_seq[..len].iter().map(Scalar::square).collect(),
    })
}

/// Positive definite iff every inspected `λ_n > 0` (`c_n` are real by
/// construction); quasi-definite iff every `λ_n ≠ 0`. Inspects `2 ≤ n ≤ N`.
pub fn classify(rec: &ThreeTermRecurrence) -> Classification {
    let mut uncertain = false;
    let mut all_positive = true;
    let mut all_nonzero = true;
    for lambda in rec.lambda.iter().skip(1) {
        match lambda.sign_within(&Scalar::one()) {
            Sign::Positive => {}
            Sign::Negative => all_positive = false,
            Sign::NearZero => {
                uncertain = true;
                all_positive = false;
                all_nonzero = false;
            }
            Sign::Zero => {
                all_positive = false;
                all_nonzero = false;
            }
        }
    }
    let verdict = if all_positive {
        Definiteness::PositiveDefinite
    } else if all_nonzero {
        Definiteness::QuasiDefinite
    } else {
        Definiteness::Degenerate
    };
    Classification { verdict, horizon: rec.len(), uncertain }
}

/// `Λ(P_m P_n)` for `0 ≤ m, n ≤ N`.
pub fn gram_matrix(polys: &[DensePolynomial], mu: &MomentSequence) -> Result<Vec<Vec<Scalar>>> {
    polys
        .iter()
        .map(|pm| polys.iter().map(|pn| mu.apply(&(pm * pn))).collect())
        .collect()
}

/// JSON report for one `h`: recurrence, Hankel determinants and verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct FavardReport {
    pub h: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub c: Vec<Scalar>,
    pub lambda: Vec<Scalar>,
    pub mu: Vec<Scalar>,
    pub delta: Vec<Scalar>,
    pub verdict: Definiteness,
    pub recurrence_verdict: Definiteness,
    pub horizon: usize,
    pub uncertain: bool,
    /// `Λ(P_m P_n) = 0` for all `m ≠ n ≤ N` and nonzero on the diagonal.
    pub orthogonal: bool,
}

/// Recurrence of `q_n^h` up to `2N`, its moments `μ_0..μ_{2N}`, Hankel
/// determinants `Δ_0..Δ_N` and the orthogonality check for `P_0..P_N`.
pub fn favard_report(h: &ArithmeticFunctionSpec, n_max: usize, mu0: Scalar, prec: Precision) -> Result<FavardReport> {
    let rec = q_recurrence(h, 2 * n_max.max(1), prec)?;
    let mu = moments_from_recurrence(&rec, 2 * n_max, mu0)?;
    let hankel = hankel_determinants(&mu, n_max, prec)?;
    let classification = classify(&ThreeTermRecurrence {
        c: rec.c[..n_max.max(1)].to_vec(),
        lambda: rec.lambda[..n_max.max(1)].to_vec(),
    });
    let polys = monic_from_recurrence(&rec, n_max)?;
    let mut orthogonal = true;
    for (m, pm) in polys.iter().enumerate() {
        for (n, pn) in polys.iter().enumerate() {
            let product = pm * pn;
            let v = mu.apply(&product)?;
            // Rounding in Λ grows with Σ|coeff·μ|, not with the result.
            let scale = product
                .coeffs()
                .iter()
                .zip(&mu.mu)
                .fold(Scalar::zero(), |acc, (c, u)| &acc + &(c * u).abs());
            let zeroish = v.sign_within(&scale).is_zeroish();
            orthogonal &= if m == n { !zeroish } else { zeroish };
        }
    }
    Ok(FavardReport {
        h: h.to_string(),
        n: n_max,
        c: rec.c[..n_max.max(1)].to_vec(),
        lambda: rec.lambda[..n_max.max(1)].to_vec(),
        mu: mu.mu,
        delta: hankel.determinants,
        verdict: hankel.verdict,
        recurrence_verdict: classification.verdict,
        horizon: n_max,
        uncertain: classification.uncertain || hankel.uncertain.iter().any(|&u| u),
        orthogonal,
    })
}
