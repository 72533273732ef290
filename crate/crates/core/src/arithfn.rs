//! Arithmetic functions `g`, `h` and the log-concavity quantities built on
//! them.
//!
//! In an `h` role every function is extended by `h(0) = 0`. That extension is
//! what makes `X(1) = 0` and `Δ_h(1) = h(1)² = 1`.

use std::fmt;
use std::path::Path;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Precision, Scalar, Sign};

/// Exponent bits above which `n^p` is not materialised for an exact root test.
const EXACT_POWER_BITS: u64 = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum ArithmeticFunctionSpec {
    /// `n^s`
    PowerS(Rational),
    /// `1`
    ConstantOne,
    /// `n`
    Identity,
    /// `σ(n) = Σ_{d | n} d`
    SigmaDivisorSum,
    /// Tabulated values `h(1), h(2), ...`.
    Table(Vec<Rational>),
    /// `(-1)^(n+1)`
    AlternatingSign,
}

impl ArithmeticFunctionSpec {
    pub fn power(s: Rational) -> Self {
        ArithmeticFunctionSpec::PowerS(s)
    }

    /// Table spec; every value must be strictly positive.
    pub fn table(values: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| v.cmp0() != std::cmp::Ordering::Greater) {
            return Err(Error::InvalidSpec(format!("table value {bad} is not positive")));
        }
        Ok(ArithmeticFunctionSpec::Table(values))
    }

    /// Parses `power:<s>`, `one`, `id`, `sigma`, `altsign`, `table:<path>` or
    /// an inline `table:[v1,v2,...]`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let spec = match t {
            "one" | "1" => ArithmeticFunctionSpec::ConstantOne,
            "id" => ArithmeticFunctionSpec::Identity,
            "sigma" => ArithmeticFunctionSpec::SigmaDivisorSum,
            "altsign" => ArithmeticFunctionSpec::AlternatingSign,
            _ => {
                if let Some(s) = t.strip_prefix("power:") {
                    let s = Scalar::parse_rational(s)
                        .map_err(|_| Error::InvalidSpec(text.to_string()))?;
                    ArithmeticFunctionSpec::PowerS(s)
                } else if let Some(rest) = t.strip_prefix("table:") {
                    if let Some(inline) = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                        let values = inline
                            .split(',')
                            .map(Scalar::parse_rational)
                            .collect::<Result<Vec<_>>>()?;
                        ArithmeticFunctionSpec::table(values)?
                    } else {
                        ArithmeticFunctionSpec::from_table_file(rest)?
                    }
                } else {
                    return Err(Error::InvalidSpec(text.to_string()));
                }
            }
        };
        Ok(spec)
    }

    /// One positive rational per line, first line is `h(1)`. Blank lines and
    /// `#` comments are skipped.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(Scalar::parse_rational)
            .collect::<Result<Vec<_>>>()?;
        ArithmeticFunctionSpec::table(values)
    }

    /// `true` when every value is rational, so downstream arithmetic stays exact.
    pub fn is_exact(&self) -> bool {
        match self {
            ArithmeticFunctionSpec::PowerS(s) => s.is_integer(),
            _ => true,
        }
    }

    /// Value at `n`; `n = 0` yields the `h(0) = 0` extension.
    pub fn eval(&self, n: u64, prec: Precision) -> Result<Scalar> {
        if n == 0 {
            return Ok(Scalar::zero());
        }
        let value = match self {
            ArithmeticFunctionSpec::ConstantOne => Scalar::one(),
            ArithmeticFunctionSpec::Identity => Scalar::from_integer(Integer::from(n)),
            ArithmeticFunctionSpec::SigmaDivisorSum => Scalar::from_integer(divisor_sum(n)),
            ArithmeticFunctionSpec::AlternatingSign => {
                Scalar::from_int(if n % 2 == 1 { 1 } else { -1 })
            }
            ArithmeticFunctionSpec::Table(values) => {
                let v = values
                    .get((n - 1) as usize)
                    .ok_or(Error::TableIndex { n, len: values.len() })?;
                Scalar::Rational(v.clone())
            }
            ArithmeticFunctionSpec::PowerS(s) => power(n, s, prec),
        };
        Ok(value)
    }

    /// `h(0), h(1), ..., h(n_max)`.
    pub fn values(&self, n_max: u64, prec: Precision) -> Result<Vec<Scalar>> {
        (0..=n_max).map(|n| self.eval(n, prec)).collect()
    }

    /// Checks the `h`-role requirements on `1..=n_max`: normalized and
    /// nowhere zero.
    pub fn check_h_role(&self, n_max: u64, prec: Precision) -> Result<()> {
        let h1 = self.eval(1, prec)?;
        if !h1.is_one() {
            return Err(Error::NotNormalized(h1.to_string()));
        }
        for n in 2..=n_max {
            if self.eval(n, prec)?.is_zero() {
                return Err(Error::ZeroValue(n));
            }
        }
        Ok(())
    }

    /// `Δ_h(n) = h(n)² − h(n−1)·h(n+1)`, `n ≥ 1`.
    pub fn delta_h(&self, n: u64, prec: Precision) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::Insufficient("delta_h needs n >= 1".into()));
        }
        let (a, b, c) = (self.eval(n - 1, prec)?, self.eval(n, prec)?, self.eval(n + 1, prec)?);
        Ok(b.square() - &a * &c)
    }

    /// `X(n) = h(n−1)·h(n+1) / h(n)²`, `n ≥ 1` (so `X(1) = 0`).
    pub fn x_ratio(&self, n: u64, prec: Precision) -> Result<Scalar> {
        if n == 0 {
            return Err(Error::Insufficient("x_ratio needs n >= 1".into()));
        }
        let (a, b, c) = (self.eval(n - 1, prec)?, self.eval(n, prec)?, self.eval(n + 1, prec)?);
        (&a * &c).checked_div(&b.square()).ok_or(Error::ZeroValue(n))
    }

    /// `D(n) = 1 + √(1 − X(n+1)) − X(n+1)·[1 + √(1 − X(n))]`, `n ≥ 1`.
    ///
    /// `D(n) ≤ 0` exactly when `v_{n+1,2}(0) ≤ v_{n,2}(0)`.
    pub fn d_criterion(&self, n: u64, prec: Precision) -> Result<Scalar> {
        let x_n = self.x_ratio(n, prec)?;
        let x_next = self.x_ratio(n + 1, prec)?;
        let root_n = sqrt_one_minus(&x_n, n, prec)?;
        let root_next = sqrt_one_minus(&x_next, n + 1, prec)?;
        let one = Scalar::one();
        Ok(&(&one + &root_next) - &(&x_next * &(&one + &root_n)))
    }

    /// Evaluates the three side conditions of the reduction lemma for
    /// `1 ≤ n ≤ n_max`.
    pub fn lemma_side_conditions(&self, n_max: u64, prec: Precision) -> Result<LemmaReport> {
        let mut rows = Vec::with_capacity(n_max as usize);
        for n in 1..=n_max {
            let h_n = self.eval(n, prec)?;
            let h_n1 = self.eval(n + 1, prec)?;
            let h_n2 = self.eval(n + 2, prec)?;
            let one = Scalar::one();

            let scale = h_n1.abs();
            let monotone = (&h_n1 - &h_n).sign_within(&scale).is_nonnegative()
                && (&h_n - &one).sign_within(&scale).is_nonnegative();

            let d_n = self.delta_h(n, prec)?;
            let d_n1 = self.delta_h(n + 1, prec)?;
            let dscale = h_n1.square();
            let delta_decreasing = (&d_n - &d_n1).sign_within(&dscale).is_nonnegative()
                && d_n1.sign_within(&dscale).is_nonnegative();

            let cubic_value = h_n1.pow_u(3) - &h_n * &h_n2.square();
            let cubic = cubic_value.sign_within(&h_n1.pow_u(3)).is_nonpositive();

            rows.push(LemmaRow {
                n,
                monotone,
                delta_decreasing,
                cubic,
                delta_n: d_n,
                delta_next: d_n1,
                cubic_value,
            });
        }
        let all_hold = rows.iter().all(|r| r.monotone && r.delta_decreasing && r.cubic);
        Ok(LemmaReport { h: self.to_string(), n_max, rows, all_hold })
    }
}

impl fmt::Display for ArithmeticFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticFunctionSpec::PowerS(s) => write!(f, "power:{s}"),
            ArithmeticFunctionSpec::ConstantOne => f.write_str("one"),
            ArithmeticFunctionSpec::Identity => f.write_str("id"),
            ArithmeticFunctionSpec::SigmaDivisorSum => f.write_str("sigma"),
            ArithmeticFunctionSpec::AlternatingSign => f.write_str("altsign"),
            ArithmeticFunctionSpec::Table(values) => {
                let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "table:[{}]", items.join(","))
            }
        }
    }
}

impl Serialize for ArithmeticFunctionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRow {
    pub n: u64,
    /// `h(n+1) ≥ h(n) ≥ 1`
    pub monotone: bool,
    /// `Δ_h(n) ≥ Δ_h(n+1) ≥ 0`
    pub delta_decreasing: bool,
    /// `h(n+1)³ − h(n)·h(n+2)² ≤ 0`
    pub cubic: bool,
    pub delta_n: Scalar,
    pub delta_next: Scalar,
    pub cubic_value: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub h: String,
    pub n_max: u64,
    pub rows: Vec<LemmaRow>,
    pub all_hold: bool,
}

fn sqrt_one_minus(x: &Scalar, n: u64, prec: Precision) -> Result<Scalar> {
    let radicand = &Scalar::one() - x;
    match radicand.sign_within(&Scalar::one()) {
        Sign::Negative => Err(Error::NegativeRadicand {
            what: "1 - X(n)",
            n,
            value: radicand.to_string(),
        }),
        Sign::NearZero | Sign::Zero => Ok(Scalar::zero()),
        Sign::Positive => Ok(radicand.sqrt(prec).expect("positive radicand")),
    }
}

/// `n^(p/q)`, exact when the result is rational, otherwise correctly rounded
/// (for `p ≥ 0`) via an integer `q`-th root of `n^p`.
fn power(n: u64, s: &Rational, prec: Precision) -> Scalar {
    if n == 1 || s.cmp0() == std::cmp::Ordering::Equal {
        return Scalar::one();
    }
    let p = s.numer().clone();
    let q = s.denom().clone();
    let base = Integer::from(n);
    let negative = p.cmp0() == std::cmp::Ordering::Less;
    let p_abs = p.clone().abs();
    let bits = base.significant_bits() as u64;

    let small_exponent = p_abs.to_u64().filter(|e| e.saturating_mul(bits) <= EXACT_POWER_BITS);
    if let (Some(e), Some(q32)) = (small_exponent, q.to_u32()) {
        let raised = base.clone().pow(e as u32);
        let (root, rem) = raised.clone().root_rem(Integer::new(), q32);
        if rem.is_zero() {
            let r = Rational::from(root);
            return Scalar::Rational(if negative { r.recip() } else { r });
        }
        let exact_bits = raised.significant_bits().max(prec.bits());
        let exact = Float::with_val(exact_bits, &raised);
        if !negative {
            return Scalar::Float(Float::with_val(prec.bits(), exact.root_ref(q32)));
        }
        let wide = Float::with_val(prec.bits() + 64, exact.root_ref(q32));
        return Scalar::Float(Float::with_val(prec.bits(), wide.recip_ref()));
    }
    let wide_prec = prec.bits() + 64;
    let exponent = Float::with_val(wide_prec, s);
    let wide = Float::with_val(wide_prec, &base).pow(&exponent);
    Scalar::Float(Float::with_val(prec.bits(), wide))
}

fn divisor_sum(n: u64) -> Integer {
    let mut total = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            let other = n / d;
            if other != d {
                total += other;
            }
        }
        d += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn half() -> ArithmeticFunctionSpec {
        ArithmeticFunctionSpec::PowerS(Rational::from((1, 2)))
    }

    #[test]
    fn eval_examples() {
        let id = ArithmeticFunctionSpec::Identity;
        assert_eq!(id.eval(5, p()).unwrap(), Scalar::from_int(5));
        let two = half().eval(4, p()).unwrap();
        assert!(two.is_rational());
        assert_eq!(two, Scalar::from_int(2));
        assert_eq!(ArithmeticFunctionSpec::SigmaDivisorSum.eval(6, p()).unwrap(), Scalar::from_int(12));
        assert!(id.eval(0, p()).unwrap().is_zero());
    }

    #[test]
    fn sigma_matches_brute_force() {
        for n in 1..200u64 {
            let brute: u64 = (1..=n).filter(|d| n % d == 0).sum();
            assert_eq!(
                ArithmeticFunctionSpec::SigmaDivisorSum.eval(n, p()).unwrap(),
                Scalar::from_int(brute as i64)
            );
        }
    }

    #[test]
    fn power_endpoints_agree_with_constant_and_identity() {
        let zero = ArithmeticFunctionSpec::PowerS(Rational::new());
        let one = ArithmeticFunctionSpec::PowerS(Rational::from(1));
        for n in 0..50 {
            let a = zero.eval(n, p()).unwrap();
            let b = one.eval(n, p()).unwrap();
            assert!(a.is_rational() && b.is_rational());
            if n > 0 {
                assert_eq!(a, ArithmeticFunctionSpec::ConstantOne.eval(n, p()).unwrap());
            }
            assert_eq!(b, ArithmeticFunctionSpec::Identity.eval(n, p()).unwrap());
        }
    }

    #[test]
    fn power_is_correctly_rounded() {
        // 2^(1/3) at 128 bits, compared against a 512-bit reference
        let s = ArithmeticFunctionSpec::PowerS(Rational::from((1, 3)));
        let got = s.eval(2, p()).unwrap();
        let reference = Float::with_val(512, 2).root(3);
        let rounded = Float::with_val(128, &reference);
        assert_eq!(got, Scalar::Float(rounded));
        // 8^(2/3) = 4 exactly
        let s = ArithmeticFunctionSpec::PowerS(Rational::from((2, 3)));
        assert_eq!(s.eval(8, p()).unwrap(), Scalar::from_int(4));
        // negative exponent stays exact when possible
        let s = ArithmeticFunctionSpec::PowerS(Rational::from((-1, 2)));
        assert_eq!(s.eval(9, p()).unwrap(), Scalar::from_ratio(1, 3));
    }

    #[test]
    fn delta_examples() {
        let id = ArithmeticFunctionSpec::Identity;
        for n in 1..30 {
            assert_eq!(id.delta_h(n, p()).unwrap(), Scalar::one());
        }
        assert!(ArithmeticFunctionSpec::ConstantOne.delta_h(3, p()).unwrap().is_zero());
        assert_eq!(ArithmeticFunctionSpec::ConstantOne.delta_h(1, p()).unwrap(), Scalar::one());
        // 2 - sqrt(3)
        let d = half().delta_h(2, p()).unwrap();
        let expected = 2.0 - 3f64.sqrt();
        assert!((d.to_f64() - expected).abs() < 1e-15);
        assert!((d.to_f64() - 0.26795).abs() < 1e-5);
    }

    #[test]
    fn x_and_d_examples() {
        let id = ArithmeticFunctionSpec::Identity;
        assert_eq!(id.x_ratio(3, p()).unwrap(), Scalar::from_ratio(8, 9));
        assert!(id.x_ratio(1, p()).unwrap().is_zero());
        for n in 2..20 {
            assert!(ArithmeticFunctionSpec::ConstantOne.d_criterion(n, p()).unwrap().is_zero());
            // Identity gives an exact zero because 1 - X(n) = 1/n² is a square
            assert!(id.d_criterion(n, p()).unwrap().is_zero());
        }
        assert_eq!(ArithmeticFunctionSpec::ConstantOne.d_criterion(1, p()).unwrap(), Scalar::from_int(-1));
        assert!(half().d_criterion(2, p()).unwrap().is_negative());
    }

    #[test]
    fn d_criterion_rejects_non_log_concave() {
        let t = ArithmeticFunctionSpec::parse("table:[1,1,10,11]").unwrap();
        assert!(matches!(t.d_criterion(1, p()), Err(Error::NegativeRadicand { .. })));
    }

    #[test]
    fn lemma_examples() {
        let r = ArithmeticFunctionSpec::Identity.lemma_side_conditions(10, p()).unwrap();
        assert!(r.all_hold);
        let r = ArithmeticFunctionSpec::ConstantOne.lemma_side_conditions(10, p()).unwrap();
        assert!(r.all_hold);

        let t = ArithmeticFunctionSpec::parse("table:[1,3,4]").unwrap();
        let r = t.lemma_side_conditions(1, p()).unwrap();
        let row = &r.rows[0];
        assert!(row.monotone);
        assert_eq!(row.delta_n, Scalar::one());
        assert_eq!(row.delta_next, Scalar::from_int(5));
        assert!(!row.delta_decreasing);
        assert_eq!(row.cubic_value, Scalar::from_int(11));
        assert!(!row.cubic);
        assert!(!r.all_hold);
        assert!(matches!(t.lemma_side_conditions(2, p()), Err(Error::TableIndex { n: 4, len: 3 })));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for s in ["one", "id", "sigma", "altsign", "power:1/2", "table:[1,3/2,2]"] {
            let spec = ArithmeticFunctionSpec::parse(s).unwrap();
            assert_eq!(ArithmeticFunctionSpec::parse(&spec.to_string()).unwrap(), spec);
        }
        assert_eq!(
            ArithmeticFunctionSpec::parse("power:0.5").unwrap(),
            ArithmeticFunctionSpec::PowerS(Rational::from((1, 2)))
        );
        assert!(ArithmeticFunctionSpec::parse("cube").is_err());
        assert!(ArithmeticFunctionSpec::parse("table:[1,-2]").is_err());
        assert!(matches!(
            ArithmeticFunctionSpec::parse("table:[1,2]").unwrap().eval(3, p()),
            Err(Error::TableIndex { n: 3, len: 2 })
        ));
    }

    #[test]
    fn table_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        std::fs::write(&path, "# h values\n1\n3/2\n\n2.25\n").unwrap();
        let spec = ArithmeticFunctionSpec::parse(&format!("table:{}", path.display())).unwrap();
        assert_eq!(spec.eval(3, p()).unwrap(), Scalar::from_ratio(9, 4));
    }

    #[test]
    fn altsign_values() {
        let a = ArithmeticFunctionSpec::AlternatingSign;
        let v: Vec<f64> = (1..5).map(|n| a.eval(n, p()).unwrap().to_f64()).collect();
        assert_eq!(v, vec![1.0, -1.0, 1.0, -1.0]);
    }

    proptest::proptest! {
        #[test]
        fn power_family_is_log_concave(num in 0u32..=20, n in 2u64..60) {
            let s = ArithmeticFunctionSpec::PowerS(Rational::from((num, 20)));
            let x = s.x_ratio(n, p()).unwrap();
            proptest::prop_assert!(x.is_positive());
            proptest::prop_assert!(x <= Scalar::one());
            if num > 0 && num < 20 {
                proptest::prop_assert!(x < Scalar::one());
            }
            let d = s.delta_h(n, p()).unwrap();
            proptest::prop_assert!(d.sign_within(&Scalar::one()).is_nonnegative());
        }

        #[test]
        fn power_is_monotone_in_n(num in 0u32..=40, n in 1u64..200) {
            let s = ArithmeticFunctionSpec::PowerS(Rational::from((num, 20)));
            proptest::prop_assert!(s.eval(n + 1, p()).unwrap() >= s.eval(n, p()).unwrap());
        }
    }
}
