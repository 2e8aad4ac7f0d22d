//! Exact rational numbers.
//!
//! Every payoff, probability and worth in the library is a [`Rational`]
//! (arbitrary precision, always in lowest terms). Nothing is ever rounded;
//! [`decimal3`] exists only for human-facing tables.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom`. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"7"`, `"-3/4"` or `" 12 / 8 "` (whitespace around the slash is
/// tolerated). Returns `None` on anything else, including a zero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Decimal rendering truncated (not rounded) to three places, the way
/// `44.166` is printed for `265/6`.
pub fn decimal3(value: &Rational) -> String {
    let scaled = (value.abs() * int(1000)).to_integer();
    let (whole, frac) = scaled.div_rem(&BigInt::from(1000));
    let sign = if value.is_negative() && !scaled.is_zero() { "-" } else { "" };
    format!("{sign}{whole}.{frac:0>3}")
}

/// `a/b` form for exact output; integers print without a denominator.
pub fn exact(value: &Rational) -> String {
    value.to_string()
}

/// Exact form followed by the truncated decimal when the value is not an
/// integer: `265/6 (44.166)`.
pub fn display(value: &Rational) -> String {
    if value.is_integer() {
        value.to_string()
    } else {
        format!("{} ({})", value, decimal3(value))
    }
}

/// Smallest multiple of `step` that is `>= value`.
pub(crate) fn ceil_to_multiple(value: &Rational, step: &Rational) -> Rational {
    (value / step).ceil() * step
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("-3/4"), Some(ratio(-3, 4)));
        assert_eq!(parse_rational(" 12 / 8 "), Some(ratio(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1.5"), None);
    }

    #[test]
    fn decimal_truncates() {
        assert_eq!(decimal3(&ratio(265, 6)), "44.166");
        assert_eq!(decimal3(&ratio(110, 3)), "36.666");
        assert_eq!(decimal3(&ratio(-1, 3)), "-0.333");
        assert_eq!(decimal3(&ratio(-1, 3000)), "0.000");
        assert_eq!(decimal3(&int(5)), "5.000");
    }

    #[test]
    fn display_forms() {
        assert_eq!(display(&int(100)), "100");
        assert_eq!(display(&ratio(3, 5)), "3/5 (0.600)");
        assert_eq!(exact(&ratio(-6, 4)), "-3/2");
    }

    #[test]
    fn ceil_multiple() {
        assert_eq!(ceil_to_multiple(&ratio(7, 2), &int(1)), int(4));
        assert_eq!(ceil_to_multiple(&int(4), &ratio(1, 2)), int(4));
        assert_eq!(ceil_to_multiple(&ratio(-7, 2), &int(2)), int(-2));
    }
}
