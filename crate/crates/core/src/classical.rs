//! Chebyshev `U_n` and associated Laguerre `L_n^{(α)}` over exact rationals,
//! and the identities tying them to `P_n^{id,h}` and `q_n^h`.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::arithfn::ArithmeticFunctionSpec;
use crate::error::Result;
use crate::favard::{monic_from_recurrence, q_recurrence};
use crate::poly::{generate_three_term, DensePolynomial};
use crate::scalar::{Precision, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ClassicalPolynomialId {
    ChebyshevU { n: usize },
    /// `α = −1` is admitted through the extension of the defining sum.
    LaguerreAlpha { n: usize, alpha: String },
}

/// `U_n = 2x U_{n−1} − U_{n−2}`, `U_0 = 1`, `U_1 = 2x`.
pub fn chebyshev_u(n: usize) -> DensePolynomial {
    chebyshev_u_upto(n).pop().expect("nonempty")
}

/// `U_0..U_n`.
pub fn chebyshev_u_upto(n: usize) -> Vec<DensePolynomial> {
    let mut out = vec![DensePolynomial::one()];
    let mut prev = DensePolynomial::zero();
    let two = Scalar::from_int(2);
    for _ in 0..n {
        let cur = out.last().unwrap().clone();
        let next = &cur.mul_x().scale(&two) - &prev;
        prev = cur;
        out.push(next);
    }
    out
}

/// `binom(t, m) = t(t−1)…(t−m+1)/m!` for rational `t`.
fn generalized_binomial(t: &Rational, m: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..m {
        acc *= Rational::from(t - Integer::from(i));
        acc /= Integer::from(i + 1);
    }
    acc
}

/// `L_n^{(α)}(x) = Σ_k binom(n+α, n−k) (−x)^k / k!`.
pub fn laguerre(n: usize, alpha: &Rational) -> DensePolynomial {
    let top = Rational::from(alpha + Integer::from(n));
    let mut k_factorial = Integer::from(1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            k_factorial *= k as u32;
        }
        let mut c = generalized_binomial(&top, n - k) / &k_factorial;
        if k % 2 == 1 {
            c = -c;
        }
        coeffs.push(Scalar::Rational(c));
    }
    DensePolynomial::new(coeffs)
}

fn factorial(n: usize) -> Scalar {
    Scalar::from_integer(Integer::from(Integer::factorial(n as u32)))
}

/// Which argument a Laguerre factor is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ArgumentSign {
    #[serde(rename = "x")]
    Plus,
    #[serde(rename = "-x")]
    Minus,
}

impl ArgumentSign {
    fn apply(self, p: DensePolynomial) -> DensePolynomial {
        match self {
            ArgumentSign::Plus => p,
            ArgumentSign::Minus => p.reflect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityFailure {
    pub n: usize,
    /// Coefficients of `lhs − rhs`, lowest degree first.
    pub diff: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantOutcome {
    pub variant: Option<ArgumentSign>,
    pub holds: bool,
    pub first_failure: Option<IdentityFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub n_min: usize,
    pub n_max: usize,
    /// Variant as usually written; `None` for identities without a sign choice.
    pub printed_variant: Option<ArgumentSign>,
    /// Variant that holds at the smallest nontrivial degree, then asserted for all `n`.
    pub resolved_variant: Option<ArgumentSign>,
    pub variants: Vec<VariantOutcome>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n_max: usize,
    pub identities: Vec<IdentityCheck>,
    pub all_passed: bool,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.identities.iter().find(|c| c.name == name)
    }
}

fn check_variant(
    n_min: usize,
    n_max: usize,
    variant: Option<ArgumentSign>,
    sides: &dyn Fn(usize, Option<ArgumentSign>) -> (DensePolynomial, DensePolynomial),
) -> VariantOutcome {
    for n in n_min..=n_max {
        let (lhs, rhs) = sides(n, variant);
        if lhs != rhs {
            return VariantOutcome {
                variant,
                holds: false,
                first_failure: Some(IdentityFailure { n, diff: (&lhs - &rhs).to_coeff_strings() }),
            };
        }
    }
    VariantOutcome { variant, holds: true, first_failure: None }
}

fn check_identity(
    name: &'static str,
    statement: &'static str,
    n_min: usize,
    n_max: usize,
    printed_variant: Option<ArgumentSign>,
    resolve_at: usize,
    sides: &dyn Fn(usize, Option<ArgumentSign>) -> (DensePolynomial, DensePolynomial),
) -> IdentityCheck {
    let candidates: Vec<Option<ArgumentSign>> = match printed_variant {
        None => vec![None],
        Some(_) => vec![Some(ArgumentSign::Plus), Some(ArgumentSign::Minus)],
    };
    let variants: Vec<VariantOutcome> =
        candidates.iter().map(|&v| check_variant(n_min, n_max, v, sides)).collect();
    let resolved_variant = candidates
        .iter()
        .copied()
        .find(|&v| {
            let (lhs, rhs) = sides(resolve_at, v);
            lhs == rhs
        })
        .flatten();
    let passed = variants
        .iter()
        .any(|o| o.holds && (printed_variant.is_none() || o.variant == resolved_variant));
    IdentityCheck { name, statement, n_min, n_max, printed_variant, resolved_variant, variants, passed }
}

/// Checks every identity for degrees up to `n_max` (at least 1) in exact
/// arithmetic. Identities involving a Laguerre argument are checked with both
/// `x` and `−x`; the variant holding at `n = 2` is recorded and must hold for
/// every degree.
pub fn verify_identities(n_max: usize) -> Result<IdentityReport> {
    let n_max = n_max.max(1);
    let prec = Precision::default();
    let one = ArithmeticFunctionSpec::ConstantOne;
    let id = ArithmeticFunctionSpec::Identity;
    // sign variants are resolved at degree 2 even for n_max = 1
    let data_n = n_max.max(2);
    let p_one = generate_three_term(&one, data_n, prec)?.polys;
    let p_id = generate_three_term(&id, data_n, prec)?.polys;
    let q_one = monic_from_recurrence(&q_recurrence(&one, data_n, prec)?, data_n)?;
    let q_id = monic_from_recurrence(&q_recurrence(&id, data_n, prec)?, data_n)?;
    let u = chebyshev_u_upto(data_n + 1);
    let alpha_one = Rational::from(1);
    let alpha_minus_one = Rational::from(-1);
    let half = Scalar::from_ratio(1, 2);
    let x = DensePolynomial::x();
    let x_over = |n: usize| x.scale(&Scalar::from_ratio(1, n as i64));

    let mut identities = Vec::new();
    identities.push(check_identity(
        "chebyshev-p",
        "P_n^{id,1}(x) = x U_{n-1}(x/2 + 1)",
        1,
        n_max,
        None,
        2,
        &|n, _| (p_one[n].clone(), &x * &u[n - 1].compose_affine(&half, &Scalar::one())),
    ));
    identities.push(check_identity(
        "laguerre-p-id",
        "P_n^{id,id}(x) = (x/n) L_{n-1}^{(1)}(±x)",
        1,
        n_max,
        Some(ArgumentSign::Plus),
        2,
        &|n, v| (p_id[n].clone(), &x_over(n) * &v.unwrap().apply(laguerre(n - 1, &alpha_one))),
    ));
    identities.push(check_identity(
        "laguerre-p-minus-one",
        "P_n^{id,id}(x) = L_n^{(-1)}(±x)",
        1,
        n_max,
        Some(ArgumentSign::Plus),
        2,
        &|n, v| (p_id[n].clone(), v.unwrap().apply(laguerre(n, &alpha_minus_one))),
    ));
    identities.push(check_identity(
        "laguerre-minus-one-extension",
        "L_n^{(-1)}(±x) = (x/n) L_{n-1}^{(1)}(-x)",
        1,
        n_max,
        Some(ArgumentSign::Plus),
        2,
        &|n, v| {
            (
                v.unwrap().apply(laguerre(n, &alpha_minus_one)),
                &x_over(n) * &laguerre(n - 1, &alpha_one).reflect(),
            )
        },
    ));
    identities.push(check_identity(
        "q-chebyshev",
        "q_n^{1}(x) = U_n(x/2 + 1)",
        0,
        n_max,
        None,
        2,
        &|n, _| (q_one[n].clone(), u[n].compose_affine(&half, &Scalar::one())),
    ));
    identities.push(check_identity(
        "q-laguerre",
        "q_n^{id}(x) = n! L_n^{(1)}(±x)",
        0,
        n_max,
        Some(ArgumentSign::Minus),
        2,
        &|n, v| (q_id[n].clone(), v.unwrap().apply(laguerre(n, &alpha_one)).scale(&factorial(n))),
    ));
    identities.push(check_identity(
        "chebyshev-turan",
        "U_n(x)^2 - U_{n-1}(x) U_{n+1}(x) = 1",
        1,
        n_max,
        None,
        2,
        &|n, _| (&(&u[n] * &u[n]) - &(&u[n - 1] * &u[n + 1]), DensePolynomial::one()),
    ));

    let all_passed = identities.iter().all(|c| c.passed);
    Ok(IdentityReport { n_max, identities, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn poly(coeffs: &[(i64, i64)]) -> DensePolynomial {
        DensePolynomial::new(coeffs.iter().map(|&(n, d)| Scalar::from_ratio(n, d)).collect())
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_u(0), DensePolynomial::one());
        assert_eq!(chebyshev_u(1), DensePolynomial::from_ints(&[0, 2]));
        assert_eq!(chebyshev_u(2), DensePolynomial::from_ints(&[-1, 0, 4]));
        assert_eq!(chebyshev_u(3), DensePolynomial::from_ints(&[0, -4, 0, 8]));
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(1, &r(1, 1)), DensePolynomial::from_ints(&[2, -1]));
        assert_eq!(laguerre(2, &r(1, 1)), poly(&[(3, 1), (-3, 1), (1, 2)]));
        assert_eq!(laguerre(0, &r(7, 3)), DensePolynomial::one());
        // extension to α = −1
        assert_eq!(laguerre(2, &r(-1, 1)), poly(&[(0, 1), (-1, 1), (1, 2)]));
    }

    #[test]
    fn laguerre_leading_coefficient() {
        for n in 0..=12usize {
            let expected = Scalar::from_ratio(if n % 2 == 0 { 1 } else { -1 }, 1) / factorial(n);
            for alpha in [r(-1, 1), r(0, 1), r(1, 2), r(3, 1)] {
                assert_eq!(*laguerre(n, &alpha).leading().unwrap(), expected);
            }
        }
    }

    #[test]
    fn laguerre_recurrence() {
        for alpha in [r(-1, 1), r(0, 1), r(1, 1), r(1, 2)] {
            let l: Vec<_> = (0..=25).map(|n| laguerre(n, &alpha)).collect();
            for n in 2..=25usize {
                let a = Scalar::Rational(alpha.clone());
                let lin = DensePolynomial::new(vec![
                    &Scalar::from_int(2 * n as i64 - 1) + &a,
                    Scalar::from_int(-1),
                ]);
                let rhs = &(&lin * &l[n - 1]) - &l[n - 2].scale(&(&Scalar::from_int(n as i64 - 1) + &a));
                assert_eq!(l[n].scale(&Scalar::from_int(n as i64)), rhs, "α = {alpha}, n = {n}");
            }
        }
    }

    #[test]
    fn monic_laguerre_recurrences() {
        // monic L̂_n^{(α)} = (x − 2n − α + 1) L̂_{n−1} − (n−1)(n+α−1) L̂_{n−2}
        for alpha in [r(0, 1), r(1, 1), r(1, 2)] {
            let a = Scalar::Rational(alpha.clone());
            let monic: Vec<_> = (0..=20)
                .map(|n| {
                    let p = laguerre(n, &alpha);
                    let lead = p.leading().unwrap().recip().unwrap();
                    p.scale(&lead)
                })
                .collect();
            for n in 2..=20usize {
                let shift = &Scalar::from_int(1 - 2 * n as i64) - &a;
                let lin = DensePolynomial::new(vec![shift, Scalar::one()]);
                let lam = &Scalar::from_int(n as i64 - 1) * &(&Scalar::from_int(n as i64 - 1) + &a);
                assert_eq!(monic[n], &(&lin * &monic[n - 1]) - &monic[n - 2].scale(&lam));
            }
        }
        // p_n = n! L_n^{(1)}(−x) is monic with c_n = −2n, λ_n = (n−1)n
        let p: Vec<_> = (0..=25).map(|n| laguerre(n, &r(1, 1)).reflect().scale(&factorial(n))).collect();
        for n in 2..=25usize {
            assert!(p[n].is_monic());
            let lin = DensePolynomial::from_ints(&[2 * n as i64, 1]);
            let lam = Scalar::from_int(((n - 1) * n) as i64);
            assert_eq!(p[n], &(&lin * &p[n - 1]) - &p[n - 2].scale(&lam));
        }
    }

    #[test]
    fn chebyshev_turan_identity() {
        let u = chebyshev_u_upto(26);
        for n in 1..=25 {
            assert_eq!(&(&u[n] * &u[n]) - &(&u[n - 1] * &u[n + 1]), DensePolynomial::one());
        }
    }

    #[test]
    fn identity_report_resolves_signs() {
        let report = verify_identities(25).unwrap();
        assert!(report.all_passed, "{report:#?}");
        let lag = report.get("laguerre-p-id").unwrap();
        assert_eq!(lag.printed_variant, Some(ArgumentSign::Plus));
        assert_eq!(lag.resolved_variant, Some(ArgumentSign::Minus));
        let plus = lag.variants.iter().find(|v| v.variant == Some(ArgumentSign::Plus)).unwrap();
        assert!(!plus.holds);
        assert_eq!(plus.first_failure.as_ref().unwrap().n, 2);

        assert_eq!(report.get("laguerre-p-minus-one").unwrap().resolved_variant, Some(ArgumentSign::Minus));
        assert_eq!(
            report.get("laguerre-minus-one-extension").unwrap().resolved_variant,
            Some(ArgumentSign::Minus)
        );
        assert_eq!(report.get("q-laguerre").unwrap().resolved_variant, Some(ArgumentSign::Minus));
        for name in ["chebyshev-p", "q-chebyshev", "chebyshev-turan"] {
            assert!(report.get(name).unwrap().passed);
        }
    }

    #[test]
    fn smallest_horizon_still_resolves() {
        let report = verify_identities(1).unwrap();
        assert!(report.all_passed);
        assert_eq!(report.get("laguerre-p-id").unwrap().resolved_variant, Some(ArgumentSign::Minus));
    }

    #[test]
    fn direct_expansion_at_two() {
        // h ≡ 1: x U_1(x/2 + 1) = x(x + 2)
        let lhs = &DensePolynomial::x() * &chebyshev_u(1).compose_affine(&Scalar::from_ratio(1, 2), &Scalar::one());
        assert_eq!(lhs, DensePolynomial::from_ints(&[0, 2, 1]));
        // h = id: (x/2) L_1^{(1)}(−x) = (x/2)(2 + x)
        let rhs = &DensePolynomial::x().scale(&Scalar::from_ratio(1, 2)) * &laguerre(1, &r(1, 1)).reflect();
        assert_eq!(rhs, poly(&[(0, 1), (1, 1), (1, 2)]));
    }
}
