//! Scalar abstraction so every probability formula runs in two arithmetics:
//! exact rationals for the closed-form checks and `f64` for simulation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational probability.
pub type Rat = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Numeric type the probability model is generic over.
///
/// Implemented for `f64` (simulation) and [`Rat`] (exact verification).
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Sized
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// 1 - x, the complementary coefficient of a beam splitter.
    fn complement(&self) -> Self {
        Self::one() - self.clone()
    }

    fn is_probability(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }

    fn one() -> Self {
        <Rat as One>::one()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        rat(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).expect("rational convertible to f64")
    }
}

/// x^k by repeated squaring; exact for rationals.
pub fn pow<T: Scalar>(base: &T, mut exp: u32) -> T {
    let mut acc = T::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * sq.clone();
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}

/// Parse a decimal or fraction literal ("0.5", "1e-6", "21/26") into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }

    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };

    let negative = mantissa.starts_with('-');
    let unsigned = mantissa.trim_start_matches(['+', '-']);
    let (int_part, frac_part) = match unsigned.split_once('.') {
        Some((i, f)) => (i, f),
        None => (unsigned, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rat::from_integer(numer * ten.pow(scale as u32))
    } else {
        Rat::new(numer, ten.pow(scale.unsigned_abs()))
    };
    Some(value)
}

/// Render a rational as `p/q` in lowest terms.
pub fn format_rational(value: &Rat) -> String {
    if value.denom().is_one() {
        format!("{}", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Round to `digits` significant digits for display.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

/// |value| of a rational, used when reporting deviations.
pub fn rat_abs(value: &Rat) -> Rat {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational("21/26").unwrap(), rat(21, 26));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("abc").is_none());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let p = rat(21, 26);
        let mut direct = Rat::one();
        for _ in 0..7 {
            direct *= p.clone();
        }
        assert_eq!(pow(&p, 7), direct);
        assert_eq!(pow(&p, 0), Rat::one());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.4140625, 6), "0.414063");
        assert_eq!(format_significant(0.0001234567, 3), "0.000123");
    }
}
