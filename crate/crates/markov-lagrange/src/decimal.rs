//! Exact decimal literals and directed decimal rounding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

/// Parses `[-]digits[.digits]` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Renders `value` with exactly `digits` fractional digits.
pub fn format_decimal(value: &BigRational, digits: usize, rounding: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = value * BigRational::from_integer(scale.clone());
    let n = match rounding {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
        Rounding::Nearest => scaled.round().to_integer(),
    };
    render_scaled(&n, digits)
}

fn render_scaled(n: &BigInt, digits: usize) -> String {
    let negative = n.is_negative();
    let magnitude = n.abs().to_string();
    let padded = if magnitude.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - magnitude.len()), magnitude)
    } else {
        magnitude
    };
    let split = padded.len() - digits;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{padded}")
    } else {
        format!("{sign}{}.{}", &padded[..split], &padded[split..])
    }
}

/// Shortest plain decimal for a rational with a terminating expansion.
pub fn format_exact(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut digits = 0usize;
    let mut twos = 0usize;
    let mut fives = 0usize;
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    digits += twos.max(fives);
    Some(format_decimal(value, digits, Rounding::Nearest))
}

/// A decimal enclosure `[lo, hi]` of a real number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    pub lo: String,
    pub hi: String,
}

impl DecimalInterval {
    pub fn new(lo: &BigRational, hi: &BigRational, digits: usize) -> Self {
        DecimalInterval {
            lo: format_decimal(lo, digits, Rounding::Down),
            hi: format_decimal(hi, digits, Rounding::Up),
        }
    }

    pub fn lower(&self) -> BigRational {
        parse_decimal(&self.lo).expect("rendered decimal")
    }

    pub fn upper(&self) -> BigRational {
        parse_decimal(&self.hi).expect("rendered decimal")
    }

    /// Longest common prefix of the two endpoints, the digits known for certain.
    pub fn certain_digits(&self) -> String {
        self.lo
            .chars()
            .zip(self.hi.chars())
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| a)
            .collect()
    }
}

impl fmt::Display for DecimalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_plain_literals() {
        assert_eq!(parse_decimal("0.174813"), Some(q(174813, 1_000_000)));
        assert_eq!(parse_decimal("-2.5"), Some(q(-5, 2)));
        assert_eq!(parse_decimal("3"), Some(q(3, 1)));
        assert_eq!(parse_decimal(".5"), Some(q(1, 2)));
        assert_eq!(parse_decimal("1e3"), None);
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn directed_rounding() {
        let third = q(1, 3);
        assert_eq!(format_decimal(&third, 4, Rounding::Down), "0.3333");
        assert_eq!(format_decimal(&third, 4, Rounding::Up), "0.3334");
        assert_eq!(format_decimal(&-third.clone(), 4, Rounding::Down), "-0.3334");
        assert_eq!(format_decimal(&q(7, 1), 0, Rounding::Nearest), "7");
        assert_eq!(format_decimal(&q(1, 200), 2, Rounding::Down), "0.00");
    }

    #[test]
    fn exact_rendering() {
        assert_eq!(format_exact(&q(706104, 1_000_000)).as_deref(), Some("0.706104"));
        assert_eq!(format_exact(&q(73, 100)).as_deref(), Some("0.73"));
        assert_eq!(format_exact(&q(1, 3)), None);
    }
}
