//! Dense univariate polynomials over [`Scalar`] and the generators of the
//! family `P_n^{g,h}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::arithfn::ArithmeticFunctionSpec;
use crate::error::{Error, Result};
use crate::scalar::{Precision, Scalar};

/// Coefficients in ascending degree. Trailing exact zeros are trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, Default)]
pub struct DensePolynomial {
    coeffs: Vec<Scalar>,
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DensePolynomial::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePolynomial::constant(Scalar::one())
    }

    pub fn x() -> Self {
        DensePolynomial::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn constant(c: Scalar) -> Self {
        DensePolynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    /// All coefficients are exact rationals.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DensePolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x · p`
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return DensePolynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Scalar::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        DensePolynomial { coeffs }
    }

    /// `p / x`; errors unless the constant term is exactly zero.
    pub fn div_x(&self) -> Result<Self> {
        match self.coeffs.first() {
            None => Ok(DensePolynomial::zero()),
            Some(c) if c.is_zero() => Ok(DensePolynomial::new(self.coeffs[1..].to_vec())),
            Some(c) => Err(Error::FamilyMismatch(format!("x does not divide polynomial (constant term {c})"))),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(a·x + b)`
    pub fn compose_affine(&self, a: &Scalar, b: &Scalar) -> Self {
        let inner = DensePolynomial::new(vec![b.clone(), a.clone()]);
        let mut acc = DensePolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &DensePolynomial::constant(c.clone());
        }
        acc
    }

    /// `p(−x)`
    pub fn reflect(&self) -> Self {
        DensePolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        DensePolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &DensePolynomial) -> (DensePolynomial, DensePolynomial) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return (DensePolynomial::zero(), self.clone());
        };
        let mut quot = vec![Scalar::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = &rem[k + d] / lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&q * dc);
            }
            // exact cancellation of the leading term even on floats
            rem[k + d] = Scalar::zero();
            quot[k] = q;
        }
        rem.truncate(d);
        (DensePolynomial::new(quot), DensePolynomial::new(rem))
    }

    /// Monic greatest common divisor (intended for exact coefficients).
    pub fn gcd(&self, other: &DensePolynomial) -> DensePolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            None => a,
            Some(l) => {
                let inv = l.recip().unwrap();
                a.scale(&inv)
            }
        }
    }

    pub fn max_abs_coeff(&self) -> Scalar {
        self.coeffs
            .iter()
            .map(Scalar::abs)
            .fold(Scalar::zero(), |m, c| if c > m { c } else { m })
    }

    /// Coefficientwise agreement. Exact equality when both sides are rational;
    /// otherwise every coefficient difference must be within
    /// `rel_tol · max |coefficient|` over both polynomials.
    pub fn agrees_with(&self, other: &DensePolynomial, rel_tol: f64) -> bool {
        if self.is_rational() && other.is_rational() {
            return self == other;
        }
        self.relative_distance(other) <= rel_tol
    }

    /// `max_k |a_k − b_k| / max_k max(|a_k|, |b_k|)`; zero for two zero polynomials.
    pub fn relative_distance(&self, other: &DensePolynomial) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut scale = self.max_abs_coeff();
        let other_scale = other.max_abs_coeff();
        if other_scale > scale {
            scale = other_scale;
        }
        if scale.is_zero() {
            return 0.0;
        }
        let mut worst = Scalar::zero();
        for k in 0..len {
            let diff = (&self.coeff(k) - &other.coeff(k)).abs();
            if diff > worst {
                worst = diff;
            }
        }
        (&worst / &scale).to_f64()
    }

    /// Coefficient strings: `"p/q"` or integers for rationals, decimals for floats.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(Scalar::to_repr_string).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(items: &[S], prec: Precision) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| Scalar::parse(s.as_ref(), prec))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensePolynomial::new(coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_coeff_strings()).expect("strings serialize")
    }

    pub fn from_json(text: &str, prec: Precision) -> Result<Self> {
        let items: Vec<String> = serde_json::from_str(text)?;
        DensePolynomial::from_coeff_strings(&items, prec)
    }
}

impl PartialEq for DensePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl Serialize for DensePolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_coeff_strings().serialize(serializer)
    }
}

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn add(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn sub(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePolynomial::new((0..len).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a DensePolynomial> for &'a DensePolynomial {
    type Output = DensePolynomial;
    fn mul(self, rhs: &'a DensePolynomial) -> DensePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return DensePolynomial::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        DensePolynomial::new(out)
    }
}

impl Neg for &DensePolynomial {
    type Output = DensePolynomial;
    fn neg(self) -> DensePolynomial {
        DensePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationMethod {
    Convolution,
    ThreeTerm,
}

/// `P_0, ..., P_N` for one choice of `(g, h)`.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratedFamily {
    pub g: ArithmeticFunctionSpec,
    pub h: ArithmeticFunctionSpec,
    pub method: GenerationMethod,
    pub polys: Vec<DensePolynomial>,
}

impl GeneratedFamily {
    pub fn get(&self, n: usize) -> Option<&DensePolynomial> {
        self.polys.get(n)
    }

    /// Highest index generated.
    pub fn max_n(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn requires_identity_g(&self) -> Result<()> {
        if self.g != ArithmeticFunctionSpec::Identity {
            return Err(Error::UnsupportedG(self.g.to_string()));
        }
        Ok(())
    }

    /// Largest coefficientwise relative distance to another family over the
    /// common index range.
    pub fn max_relative_distance(&self, other: &GeneratedFamily) -> f64 {
        self.polys
            .iter()
            .zip(&other.polys)
            .map(|(a, b)| a.relative_distance(b))
            .fold(0.0, f64::max)
    }
}

/// Values `f(0..=n_max)` on the backend chosen for `spec`: exact when the spec
/// is exact, otherwise every value is promoted to a float at `prec`.
pub fn backend_values(spec: &ArithmeticFunctionSpec, n_max: u64, prec: Precision) -> Result<Vec<Scalar>> {
    let values = spec.values(n_max, prec)?;
    if spec.is_exact() {
        Ok(values)
    } else {
        Ok(values.into_iter().map(|v| v.into_float(prec)).collect())
    }
}

/// `P_n = (x / h(n)) Σ_{k=1}^{n} g(k) P_{n−k}`, `P_0 = 1`.
pub fn generate_convolution(
    g: &ArithmeticFunctionSpec,
    h: &ArithmeticFunctionSpec,
    n_max: usize,
    prec: Precision,
) -> Result<GeneratedFamily> {
    let gv = backend_values(g, n_max as u64, prec)?;
    let hv = backend_values(h, n_max as u64, prec)?;
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(DensePolynomial::one());
    for n in 1..=n_max {
        if hv[n].is_zero() {
            return Err(Error::ZeroValue(n as u64));
        }
        let mut sum = DensePolynomial::zero();
        for k in 1..=n {
            sum = &sum + &polys[n - k].scale(&gv[k]);
        }
        let inv = hv[n].recip().expect("checked nonzero");
        polys.push(sum.mul_x().scale(&inv));
    }
    Ok(GeneratedFamily {
        g: g.clone(),
        h: h.clone(),
        method: GenerationMethod::Convolution,
        polys,
    })
}

/// `g = id` only: `h(n+1) P_{n+1} = (2h(n) + x) P_n − h(n−1) P_{n−1}` with
/// `P_0 = 1`, `P_1 = x`. Requires `h(1) = 1`.
pub fn generate_three_term(h: &ArithmeticFunctionSpec, n_max: usize, prec: Precision) -> Result<GeneratedFamily> {
    let hv = backend_values(h, n_max as u64 + 1, prec)?;
    if !hv[1].is_one() {
        return Err(Error::NotNormalized(hv[1].to_string()));
    }
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(DensePolynomial::one());
    if n_max >= 1 {
        polys.push(DensePolynomial::x());
    }
    for n in 1..n_max {
        if hv[n + 1].is_zero() {
            return Err(Error::ZeroValue(n as u64 + 1));
        }
        let two_h = &Scalar::from_int(2) * &hv[n];
        let lifted = &polys[n].mul_x() + &polys[n].scale(&two_h);
        let next = &lifted - &polys[n - 1].scale(&hv[n - 1]);
        let inv = hv[n + 1].recip().expect("checked nonzero");
        polys.push(next.scale(&inv));
    }
    Ok(GeneratedFamily {
        g: ArithmeticFunctionSpec::Identity,
        h: h.clone(),
        method: GenerationMethod::ThreeTerm,
        polys,
    })
}

/// Writes `n,k,coefficient` rows for every generated polynomial.
pub fn coefficient_table_csv(family: &GeneratedFamily) -> String {
    let mut out = String::from("n,k,coefficient\n");
    for (n, p) in family.polys.iter().enumerate() {
        for (k, c) in p.coeffs().iter().enumerate() {
            out.push_str(&format!("{n},{k},{c}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn p() -> Precision {
        Precision::default()
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn ring_examples() {
        let p2 = DensePolynomial::from_ints(&[0, 2, 1]);
        assert_eq!(p2.eval(&Scalar::one()), Scalar::from_int(3));
        let two_x = DensePolynomial::from_ints(&[0, 2]);
        assert_eq!(two_x.compose_affine(&q(1, 2), &Scalar::one()), DensePolynomial::from_ints(&[2, 1]));
        let a = DensePolynomial::from_ints(&[1, 1]);
        let b = DensePolynomial::from_ints(&[-1, 1]);
        assert_eq!(&a * &b, DensePolynomial::from_ints(&[-1, 0, 1]));
        assert_eq!(&a - &a, DensePolynomial::zero());
        assert_eq!((&a + &b).degree(), Some(1));
    }

    #[test]
    fn div_rem_and_gcd() {
        // (x+1)(x+3) = x² + 4x + 3
        let p = DensePolynomial::from_ints(&[3, 4, 1]);
        let (quot, rem) = p.div_rem(&DensePolynomial::from_ints(&[1, 1]));
        assert_eq!(quot, DensePolynomial::from_ints(&[3, 1]));
        assert!(rem.is_zero());
        let g = DensePolynomial::from_ints(&[3, 4, 1]).gcd(&DensePolynomial::from_ints(&[2, 3, 1]));
        assert_eq!(g, DensePolynomial::from_ints(&[1, 1]));
        let sq = DensePolynomial::from_ints(&[1, 2, 1]);
        assert_eq!(sq.gcd(&sq.derivative()).degree(), Some(1));
    }

    #[test]
    fn convolution_examples() {
        let id = ArithmeticFunctionSpec::Identity;
        let fam = generate_convolution(&id, &id, 3, p()).unwrap();
        assert_eq!(fam.polys[1], DensePolynomial::x());
        assert_eq!(fam.polys[2], DensePolynomial::new(vec![Scalar::zero(), Scalar::one(), q(1, 2)]));
        let p3 = DensePolynomial::new(vec![Scalar::zero(), Scalar::one(), Scalar::one(), q(1, 6)]);
        assert_eq!(fam.polys[3], p3);

        // P_2 = x(x+2)/h(2) for an arbitrary h
        let t = ArithmeticFunctionSpec::parse("table:[1,5/3,4]").unwrap();
        let fam = generate_convolution(&id, &t, 2, p()).unwrap();
        let expected = DensePolynomial::from_ints(&[0, 2, 1]).scale(&q(3, 5));
        assert_eq!(fam.polys[2], expected);
    }

    #[test]
    fn three_term_examples() {
        let one = ArithmeticFunctionSpec::ConstantOne;
        let fam = generate_three_term(&one, 3, p()).unwrap();
        assert_eq!(fam.polys[3], DensePolynomial::from_ints(&[0, 3, 4, 1]));
        let id = ArithmeticFunctionSpec::Identity;
        let a = generate_three_term(&id, 3, p()).unwrap();
        let b = generate_convolution(&id, &id, 3, p()).unwrap();
        assert_eq!(a.polys, b.polys);
        assert_eq!(generate_three_term(&id, 1, p()).unwrap().polys[1], DensePolynomial::x());
    }

    #[test]
    fn zero_h_is_reported() {
        let t = ArithmeticFunctionSpec::Table(vec![Rational::from(1), Rational::new(), Rational::from(1)]);
        let id = ArithmeticFunctionSpec::Identity;
        assert!(matches!(generate_convolution(&id, &t, 2, p()), Err(Error::ZeroValue(2))));
        assert!(matches!(generate_three_term(&t, 2, p()), Err(Error::ZeroValue(2))));
    }

    #[test]
    fn sigma_generation() {
        // g = σ, h = id: P_2 = x(x + 3)/2 from (x/2)(σ(1)P_1 + σ(2)P_0)
        let fam = generate_convolution(
            &ArithmeticFunctionSpec::SigmaDivisorSum,
            &ArithmeticFunctionSpec::Identity,
            4,
            p(),
        )
        .unwrap();
        assert_eq!(fam.polys[2], DensePolynomial::new(vec![Scalar::zero(), q(3, 2), q(1, 2)]));
        assert!(fam.requires_identity_g().is_err());
    }

    #[test]
    fn float_family_for_irrational_power() {
        let h = ArithmeticFunctionSpec::PowerS(Rational::from((1, 2)));
        let a = generate_three_term(&h, 20, p()).unwrap();
        let b = generate_convolution(&ArithmeticFunctionSpec::Identity, &h, 20, p()).unwrap();
        assert!(a.max_relative_distance(&b) <= 2f64.powi(16 - 128));
        assert!(a.polys[5].coeffs().iter().all(|c| !c.is_rational()));
    }

    #[test]
    fn json_round_trip() {
        let p3 = DensePolynomial::new(vec![Scalar::zero(), Scalar::one(), Scalar::one(), q(1, 6)]);
        assert_eq!(p3.to_json(), r#"["0","1","1","1/6"]"#);
        assert_eq!(DensePolynomial::from_json(&p3.to_json(), p()).unwrap(), p3);
        let f = DensePolynomial::new(vec![Scalar::from_f64(0.1, p()), Scalar::from_f64(-2.5, p())]);
        let back = DensePolynomial::from_json(&f.to_json(), p()).unwrap();
        assert_eq!(back, f);
        assert!(!back.is_rational());
    }

    #[test]
    fn coefficient_csv() {
        let fam = generate_three_term(&ArithmeticFunctionSpec::Identity, 2, p()).unwrap();
        assert_eq!(coefficient_table_csv(&fam), "n,k,coefficient\n0,0,1\n1,0,0\n1,1,1\n2,0,0\n2,1,1\n2,2,1/2\n");
    }

    fn h_strategy() -> impl proptest::strategy::Strategy<Value = ArithmeticFunctionSpec> {
        use proptest::prelude::*;
        prop::collection::vec((1i64..20, 1i64..20), 12..13).prop_map(|vals| {
            let mut table = vec![Rational::from(1)];
            table.extend(vals.into_iter().map(|(a, b)| Rational::from((a, b))));
            ArithmeticFunctionSpec::Table(table)
        })
    }

    proptest::proptest! {
        #[test]
        fn generators_agree_and_family_shape_holds(h in h_strategy()) {
            let n_max = 12;
            let a = generate_convolution(&ArithmeticFunctionSpec::Identity, &h, n_max, p()).unwrap();
            let b = generate_three_term(&h, n_max, p()).unwrap();
            proptest::prop_assert_eq!(&a.polys, &b.polys);
            let mut prod = Scalar::one();
            for (n, poly) in a.polys.iter().enumerate() {
                proptest::prop_assert_eq!(poly.degree(), Some(n));
                if n >= 1 {
                    proptest::prop_assert!(poly.coeff(0).is_zero());
                }
                if n >= 2 {
                    prod = &prod * &h.eval(n as u64, p()).unwrap();
                }
                proptest::prop_assert!(poly.coeffs().iter().all(|c| !c.is_negative()));
                proptest::prop_assert_eq!(poly.leading().unwrap().clone(), prod.recip().unwrap());
            }
        }

        #[test]
        fn compose_affine_matches_pointwise(
            coeffs in proptest::collection::vec(-20i64..20, 1..6),
            a in 1i64..5, b in -5i64..5, x in -10i64..10,
        ) {
            let poly = DensePolynomial::from_ints(&coeffs);
            let (a, b, x) = (Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(x));
            let composed = poly.compose_affine(&a, &b);
            proptest::prop_assert_eq!(composed.eval(&x), poly.eval(&(&(&a * &x) + &b)));
        }
    }
}
