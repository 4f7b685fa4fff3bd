//! Rational scalars, their canonical text form and fixed-point rendering.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` (optional sign, `q ≠ 0`).
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"` in lowest terms with `q > 0`, or `"p"` when `q = 1`.
pub fn format(q: &Rational) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Fixed-point expansion with `digits` fractional digits, rounded half away
/// from zero. Used only for rendering.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let (whole, rem) = scaled.numer().div_rem(scaled.denom());
    let mut units = whole;
    if rem * BigInt::from(2) >= *scaled.denom() {
        units += 1;
    }
    let (int_part, frac_part) = units.div_rem(&scale);
    let negative = q.is_negative() && !(int_part.is_zero() && frac_part.is_zero());
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
}

/// Rational extended by `+∞`, used for caller-supplied sphere-area bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRational {
    Finite(Rational),
    Infinite,
}

impl ExtRational {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }

    /// `value < self`
    pub fn exceeds(&self, value: &Rational) -> bool {
        match self {
            ExtRational::Finite(q) => value < q,
            ExtRational::Infinite => true,
        }
    }

    pub fn min_with(&self, value: &Rational) -> Rational {
        match self {
            ExtRational::Finite(q) if q < value => q.clone(),
            _ => value.clone(),
        }
    }

    pub fn minus(&self, value: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(q) => ExtRational::Finite(q - value),
            ExtRational::Infinite => ExtRational::Infinite,
        }
    }
}

impl FromStr for ExtRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "∞" => Ok(ExtRational::Infinite),
            other => parse(other).map(ExtRational::Finite),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => f.write_str(&format(q)),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse(" 6/-4 ").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(format(&ratio(6, -4)), "-3/2");
        assert_eq!(format(&int(7)), "7");
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&ratio(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&ratio(2, 3), 5), "0.66667");
        assert_eq!(to_decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&int(12), 2), "12.00");
        assert_eq!(to_decimal(&ratio(-1, 10_000), 2), "0.00");
    }

    #[test]
    fn extended() {
        let inf: ExtRational = "inf".parse().unwrap();
        assert!(inf.exceeds(&int(1_000_000)));
        assert_eq!(inf.min_with(&int(3)), int(3));
        let five: ExtRational = "5".parse().unwrap();
        assert_eq!(five.min_with(&int(6)), int(5));
        assert!(!five.exceeds(&int(5)));
        assert_eq!(inf.to_string(), "inf");
    }
}
