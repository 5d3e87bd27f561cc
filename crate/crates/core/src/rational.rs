//! Exact rational numbers used for lengths, divisor coefficients and
//! different values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Converts an integral rational into an `i64`, if it fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !is_integral(q) {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

/// Parses `"a/b"` or `"a"`. Whitespace is not accepted.
pub fn parse(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return None;
    }
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text: lowest terms, positive denominator, `"a"` when integral.
pub fn format(q: &Rational) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    q.to_string()
}
