//! Numeric back ends: exact rationals and tolerance-compared floats.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. The exact back
//! end ([`Rational`]) is the default for correctness work because the
//! identities the algorithms rely on are exact equalities; the float back end
//! (`f64`) trades that for speed on large instances and compares within an
//! absolute [`Tolerance`].

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used by exact mode.
pub type Rational = BigRational;

/// Default absolute tolerance for float mode.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Absolute comparison tolerance. Exact scalars ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance(0.0);

    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon >= 0.0 {
            Ok(Tolerance(epsilon))
        } else {
            Err(Error::InvalidValue(epsilon.to_string()))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::EXACT
    }
}

/// How numbers are represented and compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericMode {
    /// Rational arithmetic; `scale` is the common denominator of the parsed
    /// inputs, so one unit of the scale is `1 / scale`.
    Exact { scale: u64 },
    /// Binary floating point compared with absolute tolerance `epsilon`.
    Float { epsilon: f64 },
}

impl NumericMode {
    pub fn float() -> Self {
        NumericMode::Float {
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericMode::Exact { .. })
    }

    pub fn tolerance(&self) -> Tolerance {
        match *self {
            NumericMode::Exact { .. } => Tolerance::EXACT,
            NumericMode::Float { epsilon } => Tolerance(epsilon.max(0.0)),
        }
    }
}

impl Default for NumericMode {
    fn default() -> Self {
        NumericMode::Exact { scale: 1 }
    }
}

/// A totally ordered field element usable as a finite tropical value.
///
/// Implementations must never hold NaN; constructors in this crate check
/// [`Scalar::is_valid`] at the boundary.
pub trait Scalar: Clone + Debug + Display + PartialEq + PartialOrd + Send + Sync + 'static {
    /// Short name reported in diagnostics ("exact" or "float").
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// False for NaN or infinite floats.
    fn is_valid(&self) -> bool;

    /// `self <= other` up to the tolerance.
    fn le_within(&self, other: &Self, tol: Tolerance) -> bool;

    /// `self == other` up to the tolerance.
    fn eq_within(&self, other: &Self, tol: Tolerance) -> bool {
        self.le_within(other, tol) && other.le_within(self, tol)
    }

    /// Parses a decimal string such as `0.25`, `-3`, `1e-2`; exact scalars
    /// also accept `a/b`.
    fn parse_decimal(s: &str) -> Result<Self>;

    /// JSON form: a lossless decimal (or fraction) string in exact mode, a
    /// number in float mode.
    fn to_json(&self) -> serde_json::Value;

    fn to_f64(&self) -> f64;

    /// Human-readable form used in diagnostics (decimal where exact).
    fn to_plain_string(&self) -> String {
        self.to_string()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Total order on valid values.
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn max_of(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(&self, other: &Self) -> Self {
        if self.total_cmp(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for Rational {
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn is_valid(&self) -> bool {
        true
    }

    fn le_within(&self, other: &Self, _tol: Tolerance) -> bool {
        self <= other
    }

    fn eq_within(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_plain_string(&self) -> String {
        format_rational(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const MODE: &'static str = "float";

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }

    fn le_within(&self, other: &Self, tol: Tolerance) -> bool {
        *self <= *other + tol.epsilon()
    }

    fn eq_within(&self, other: &Self, tol: Tolerance) -> bool {
        (self - other).abs() <= tol.epsilon()
    }

    fn parse_decimal(s: &str) -> Result<Self> {
        let t = s.trim();
        let v = f64::from_str(t).map_err(|_| Error::ParseNumber {
            input: s.to_string(),
            reason: "not a decimal number",
        })?;
        if !v.is_finite() {
            return Err(Error::ParseNumber {
                input: s.to_string(),
                reason: "NaN and infinities are not finite values",
            });
        }
        Ok(v)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

/// Parses `[+-]digits[.digits][e[+-]digits]` or `[+-]a/b` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |reason| Error::ParseNumber {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }

    if let Some((num, den)) = t.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let den = parse_integer(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = body[pos + 1..]
                .parse()
                .map_err(|_| err("bad exponent"))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("not a decimal number"));
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(err("exponent out of range"));
    }

    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&digits).map_err(|_| err("not a decimal number"))?;
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

/// Formats a rational as a terminating decimal when its denominator is of the
/// form 2^a 5^b, and as `numer/denom` otherwise.
pub fn format_rational(r: &Rational) -> String {
    let denom = r.denom();
    if denom.is_one() {
        return r.numer().to_string();
    }

    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", r.numer(), denom);
    }

    let places = twos.max(fives);
    let scaled = r.numer() * num_traits::pow(BigInt::from(10u32), places) / denom;
    let sign = if scaled.sign() == Sign::Minus { "-" } else { "" };
    let digits = scaled.magnitude().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    format!("{sign}{int_part}.{frac_part}")
}

/// Least common denominator of a set of rationals, saturated to `u64`.
pub fn common_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> u64 {
    let lcm = values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    lcm.to_u64().unwrap_or(u64::MAX)
}
