//! Arithmetic backends: exact rationals for certification, `f64` for search.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Arithmetic mode of a value or tournamenton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(ParseError::new(format!("unknown mode `{other}`"))),
        }
    }
}

/// Number type used for kernel values, weights and densities.
///
/// The `Ring` associated type is what the density enumerator accumulates in:
/// exact values are rescaled to integer numerators over a common denominator
/// so that the inner loop never normalizes fractions.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static
{
    const MODE: Mode;

    type Ring: Clone + Zero + One + std::ops::Mul<Output = Self::Ring> + Send + Sync;

    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses `p/q`, integers or plain decimals.
    fn parse_value(s: &str) -> Result<Self, ParseError>;

    /// Tolerance used for regularity and inequality verdicts.
    fn default_tolerance() -> Self;

    /// Integer numerators of `values` over a shared denominator (`f64` uses 1).
    fn to_ring(values: &[Self]) -> (Vec<Self::Ring>, Self);

    fn from_ring(value: Self::Ring) -> Self;

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// `2^e` for a possibly negative exponent.
    fn pow2(e: i64) -> Self;

    fn powu(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }

    /// p/q plus a 12-digit decimal approximation in exact mode, plain decimal otherwise.
    fn pretty(&self) -> String;

    /// Slack allowed when validating invariants of loaded or converted data.
    fn validation_tolerance() -> Self;

    /// A pair `(x, y)` with `x ≈ u` and `x + y == 1` holding exactly in this arithmetic.
    fn complement_pair(u: &Self) -> (Self, Self) {
        (u.clone(), Self::one() - u.clone())
    }

    /// Sample from a symmetric distribution on `[-1, 1]`.
    fn sample_symmetric<R: rand::Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Exact;
    type Ring = BigInt;

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_value(s: &str) -> Result<Self, ParseError> {
        parse_rational(s)
    }

    fn default_tolerance() -> Self {
        BigRational::zero()
    }

    fn to_ring(values: &[Self]) -> (Vec<BigInt>, Self) {
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = values
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        (nums, BigRational::from_integer(den))
    }

    fn from_ring(value: BigInt) -> Self {
        BigRational::from_integer(value)
    }

    fn pow2(e: i64) -> Self {
        let p = BigInt::one() << e.unsigned_abs();
        if e >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }

    fn pretty(&self) -> String {
        format!("{} (~{:.12e})", self, Scalar::to_f64(self))
    }

    fn validation_tolerance() -> Self {
        BigRational::zero()
    }

    fn sample_symmetric<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        BigRational::ratio(rng.gen_range(-RATIONAL_GRID..=RATIONAL_GRID), RATIONAL_GRID)
    }
}

/// Exact random samples live on the grid `{-K/K, …, K/K}` to keep denominators small.
const RATIONAL_GRID: i64 = 6;

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;
    type Ring = f64;

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_value(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| ParseError::new(format!("bad value `{s}`")))?;
            let q: f64 = q.trim().parse().map_err(|_| ParseError::new(format!("bad value `{s}`")))?;
            if q == 0.0 {
                return Err(ParseError::new(format!("zero denominator in `{s}`")));
            }
            Ok(p / q)
        } else {
            s.parse().map_err(|_| ParseError::new(format!("bad value `{s}`")))
        }
    }

    fn default_tolerance() -> Self {
        1e-9
    }

    fn to_ring(values: &[Self]) -> (Vec<f64>, Self) {
        (values.to_vec(), 1.0)
    }

    fn from_ring(value: f64) -> Self {
        value
    }

    fn pow2(e: i64) -> Self {
        2f64.powi(e as i32)
    }

    fn pretty(&self) -> String {
        format!("{self:.12e}")
    }

    fn validation_tolerance() -> Self {
        1e-12
    }

    /// The entry that is at least 1/2 is kept and the other is `1 - x`, which
    /// is exact for `x` in `[1/2, 1]`, so the sum rounds to exactly 1.
    fn complement_pair(u: &Self) -> (Self, Self) {
        let u = u.clamp(0.0, 1.0);
        if u >= 0.5 {
            (u, 1.0 - u)
        } else {
            let v = 1.0 - u;
            (1.0 - v, v)
        }
    }

    fn sample_symmetric<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }
}

/// Exact parse of `p/q`, an integer, or a decimal such as `-0.125` or `2.5e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::new(format!("bad rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseError::new(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Converts between modes; exact → float rounds, float → exact is the binary value.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    Scalar::to_f64(v)
}

pub fn f64_to_rational(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::ratio(p, d)
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("1").unwrap(), q(1, 1));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn ring_rescaling_is_exact() {
        let vals = vec![q(1, 2), q(1, 3), q(5, 6)];
        let (nums, den) = BigRational::to_ring(&vals);
        assert_eq!(den, q(6, 1));
        assert_eq!(nums, vec![BigInt::from(3), BigInt::from(2), BigInt::from(5)]);
    }

    #[test]
    fn float_complement_sums_to_one() {
        for &u in &[0.0, 0.1, 0.3, 0.5, 0.7, 0.123456789, 1e-17, 0.999999999999] {
            let (x, y) = f64::complement_pair(&u);
            assert_eq!(x + y, 1.0);
            assert!((x - u).abs() < 1e-15);
        }
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(BigRational::pow2(-3), q(1, 8));
        assert_eq!(BigRational::pow2(4), q(16, 1));
        assert_eq!(f64::pow2(-2), 0.25);
    }
}
