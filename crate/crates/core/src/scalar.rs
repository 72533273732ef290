//! Exact-or-float scalar used throughout the crate.
//!
//! A [`Scalar`] is either an exact [`Rational`] (always canonical: lowest
//! terms, positive denominator) or an MPFR-backed binary [`Float`] carrying its
//! own precision. Operations on two rationals stay rational; mixing kinds
//! promotes the rational side to a float at the float's precision, and two
//! floats combine at the wider of their precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default working precision of the float backend, in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Smallest precision accepted anywhere a precision is configured.
pub const MIN_PRECISION: u32 = 53;

/// Validated float precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION {
            return Err(Error::Precision(bits));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision used for intermediates that need headroom (Hankel
    /// determinants, root extraction before final rounding).
    pub fn doubled(self) -> Precision {
        Precision(self.0 * 2)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    Rational,
    Float,
}

/// Sign of a scalar after the tolerance rule is applied.
///
/// Rationals only ever report exact signs. Floats whose magnitude is at most
/// `2^(10 - prec) * scale` report [`Sign::NearZero`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    NearZero,
    Positive,
}

impl Sign {
    /// `true` for `Zero` and `NearZero`.
    pub fn is_zeroish(self) -> bool {
        matches!(self, Sign::Zero | Sign::NearZero)
    }

    /// Value is `<= 0` up to tolerance.
    pub fn is_nonpositive(self) -> bool {
        !matches!(self, Sign::Positive)
    }

    /// Value is `>= 0` up to tolerance.
    pub fn is_nonnegative(self) -> bool {
        !matches!(self, Sign::Negative)
    }
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Float(Float),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::new())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(Rational::from(n))
    }

    pub fn from_integer(n: Integer) -> Self {
        Scalar::Rational(Rational::from(n))
    }

    /// Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(Rational::from((num, den)))
    }

    pub fn from_f64(value: f64, prec: Precision) -> Self {
        Scalar::Float(Float::with_val(prec.bits(), value))
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Float precision, `None` for rationals.
    pub fn prec(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Float(f) => Some(f.prec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => *r == 1,
            Scalar::Float(f) => *f == 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    /// Converts to a float with exactly `prec` bits, rounding to nearest.
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Scalar::Rational(r) => Float::with_val(prec, r),
            Scalar::Float(f) => Float::with_val(prec, f),
        }
    }

    /// Promotes to the float backend (no-op for floats already at least `prec` wide).
    pub fn into_float(self, prec: Precision) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Float(Float::with_val(prec.bits(), r)),
            f @ Scalar::Float(_) => f,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone().abs()),
            Scalar::Float(f) => Scalar::Float(f.clone().abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn pow_u(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone().pow(exp)),
            Scalar::Float(f) => Scalar::Float(f.clone().pow(exp)),
        }
    }

    /// Exact sign, ignoring tolerance.
    pub fn cmp_zero(&self) -> Ordering {
        match self {
            Scalar::Rational(r) => r.cmp0(),
            Scalar::Float(f) => f.cmp0().unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_zero() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.cmp_zero() == Ordering::Less
    }

    /// Zero tolerance for a float of precision `prec`: `2^(10 - prec) * scale`.
    pub fn tolerance(prec: u32, scale: f64) -> f64 {
        let scale = if scale.is_finite() && scale > 0.0 { scale } else { 1.0 };
        2f64.powi(10 - prec as i32) * scale
    }

    /// Sign with the float tolerance rule applied relative to `scale`.
    pub fn sign_within(&self, scale: &Scalar) -> Sign {
        match self {
            Scalar::Rational(r) => match r.cmp0() {
                Ordering::Less => Sign::Negative,
                Ordering::Equal => Sign::Zero,
                Ordering::Greater => Sign::Positive,
            },
            Scalar::Float(f) => {
                if f.is_zero() {
                    return Sign::Zero;
                }
                let tol = Scalar::tolerance(f.prec(), scale.abs().to_f64());
                if f.clone().abs() <= tol {
                    Sign::NearZero
                } else if f.is_sign_negative() {
                    Sign::Negative
                } else {
                    Sign::Positive
                }
            }
        }
    }

    /// Sign of a float relative to `tol * scale`. Rationals report their
    /// exact sign.
    pub fn sign_with_tol(&self, tol: f64, scale: &Scalar) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Scalar::Rational(_) = self {
            return self.sign_within(scale);
        }
        let s = scale.abs().to_f64();
        let bound = tol * if s > 0.0 && s.is_finite() { s } else { 1.0 };
        let v = self.to_f64();
        if v.abs() <= bound {
            Sign::NearZero
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    /// Square root. Perfect-square rationals stay rational; everything else is
    /// rounded to `prec`. Returns `None` for negative input.
    pub fn sqrt(&self, prec: Precision) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.cmp0() == Ordering::Less {
                    return None;
                }
                let (num, den) = (r.numer(), r.denom());
                if num.is_perfect_square() && den.is_perfect_square() {
                    let num = num.clone().sqrt();
                    let den = den.clone().sqrt();
                    return Some(Scalar::Rational(Rational::from((num, den))));
                }
                let wide = Float::with_val(prec.bits() + 64, r);
                Some(Scalar::Float(Float::with_val(prec.bits(), wide.sqrt_ref())))
            }
            Scalar::Float(f) => {
                if f.is_sign_negative() && !f.is_zero() {
                    return None;
                }
                let p = f.prec().max(prec.bits());
                Some(Scalar::Float(Float::with_val(p, f.sqrt_ref())))
            }
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone().recip()),
            Scalar::Float(f) => Scalar::Float(f.clone().recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            return None;
        }
        Some(self / rhs)
    }

    /// Parses `"p/q"`, integers, and decimals (`"0.25"`, `"1e-3"`) exactly.
    pub fn parse_rational(text: &str) -> Result<Rational> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::InvalidNumber(text.to_string()));
        }
        if t.contains('/') {
            return Rational::parse(t)
                .map(Rational::from)
                .map_err(|_| Error::InvalidNumber(text.to_string()));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = t[i + 1..]
                    .parse()
                    .map_err(|_| Error::InvalidNumber(text.to_string()))?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((a, b)) => (a, b),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(Error::InvalidNumber(text.to_string()));
        }
        let all = format!("{int_part}{frac_part}");
        let mut num = Integer::from_str_radix(if all.is_empty() { "0" } else { &all }, 10)
            .map_err(|_| Error::InvalidNumber(text.to_string()))?;
        if negative {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = Integer::from(10);
        let value = if scale >= 0 {
            Rational::from(num * ten.pow(scale as u32))
        } else {
            Rational::from((num, ten.pow((-scale) as u32)))
        };
        Ok(value)
    }

    /// Parses a serialized scalar: rationals (`"p/q"` or an integer) stay
    /// exact, decimal strings become floats at `prec`.
    pub fn parse(text: &str, prec: Precision) -> Result<Scalar> {
        let t = text.trim();
        if t.contains(['.', 'e', 'E']) {
            let parsed = Float::parse(t).map_err(|_| Error::InvalidNumber(text.to_string()))?;
            Ok(Scalar::Float(Float::with_val(prec.bits(), parsed)))
        } else {
            Scalar::parse_rational(t).map(Scalar::Rational)
        }
    }

    /// Canonical text form: `"p/q"` or `"p"` for rationals, the shortest
    /// decimal that reparses to the same float for floats.
    pub fn to_repr_string(&self) -> String {
        match self {
            Scalar::Rational(r) => r.to_string(),
            Scalar::Float(f) => shortest_decimal(f),
        }
    }
}

/// Shortest decimal string that reparses to exactly `f` at `f.prec()`.
///
/// Positional notation is used for decimal exponents in `-6..=21`,
/// scientific otherwise; the result always contains `.` or `e` so it
/// reparses as a float rather than a rational.
pub fn shortest_decimal(f: &Float) -> String {
    if f.is_zero() {
        return "0.0".to_string();
    }
    if !f.is_finite() {
        return f.to_string();
    }
    let prec = f.prec();
    let render = |digits: usize| -> String {
        let (negative, mantissa, exp) = f.to_sign_string_exp(10, Some(digits));
        format_decimal(negative, &mantissa, exp.unwrap_or(0))
    };
    let roundtrips = |text: &str| -> bool {
        match Float::parse(text) {
            Ok(p) => Float::with_val(prec, p) == *f,
            Err(_) => false,
        }
    };
    // enough digits for any value of this precision
    let mut hi = 2 + (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize;
    let mut lo = 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if roundtrips(&render(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    render(lo)
}

/// Formats `0.mantissa × 10^exp`.
fn format_decimal(negative: bool, mantissa: &str, exp: i32) -> String {
    let digits = mantissa.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };
    let len = digits.len() as i32;
    if (-6..=21).contains(&exp) {
        if exp <= 0 {
            format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
        } else if exp >= len {
            format!("{sign}{digits}{}.0", "0".repeat((exp - len) as usize))
        } else {
            let (a, b) = digits.split_at(exp as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (first, rest) = digits.split_at(1);
        let rest = if rest.is_empty() { "0" } else { rest };
        format!("{sign}{first}.{rest}e{}", exp - 1)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_repr_string())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_repr_string())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<Float> for Scalar {
    fn from(f: Float) -> Self {
        Scalar::Float(f)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Some(a.cmp(b)),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Rational(b)) => a.partial_cmp(b),
            (Scalar::Rational(a), Scalar::Float(b)) => b.partial_cmp(a).map(Ordering::reverse),
        }
    }
}

fn float_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => {
                        Scalar::Rational(Rational::from($trait::$method(a, b)))
                    }
                    (Scalar::Float(a), Scalar::Float(b)) => {
                        let p = float_prec(a, b);
                        Scalar::Float(Float::with_val(p, $trait::$method(a, b)))
                    }
                    (Scalar::Float(a), Scalar::Rational(b)) => {
                        let b = Float::with_val(a.prec(), b);
                        Scalar::Float(Float::with_val(a.prec(), $trait::$method(a, &b)))
                    }
                    (Scalar::Rational(a), Scalar::Float(b)) => {
                        let a = Float::with_val(b.prec(), a);
                        Scalar::Float(Float::with_val(b.prec(), $trait::$method(&a, b)))
                    }
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }

        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}
