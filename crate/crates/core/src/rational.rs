//! Exact rational scalars and their text form.
//!
//! The accepted grammar is an optional sign, decimal digits, and optionally
//! `/` followed by a positive decimal denominator: `-3/2`, `7`, `+4/6`.
//! Values are always kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;
pub use num_bigint::BigInt as Integer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("unexpected character {ch:?} at offset {offset} in {text:?}")]
    UnexpectedChar {
        text: String,
        ch: char,
        offset: usize,
    },
    #[error("missing digits in {0:?}")]
    MissingDigits(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    if text.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let (negative, body, body_offset) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..], 1),
        b'+' => (false, &text[1..], 1),
        _ => (false, text, 0),
    };
    let (num_text, den_text) = match body.find('/') {
        Some(slash) => (&body[..slash], Some((&body[slash + 1..], body_offset + slash + 1))),
        None => (body, None),
    };
    let numerator = parse_digits(text, num_text, body_offset)?;
    let denominator = match den_text {
        Some((digits, offset)) => parse_digits(text, digits, offset)?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_string()));
    }
    let numerator = if negative { -numerator } else { numerator };
    Ok(Rational::new(numerator, denominator))
}

fn parse_digits(text: &str, digits: &str, offset: usize) -> Result<BigInt, RationalParseError> {
    if digits.is_empty() {
        return Err(RationalParseError::MissingDigits(text.to_string()));
    }
    if let Some((pos, ch)) = digits.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        return Err(RationalParseError::UnexpectedChar {
            text: text.to_string(),
            ch,
            offset: offset + pos,
        });
    }
    // Only ASCII digits remain, so this cannot fail.
    Ok(digits.parse().expect("ascii digits"))
}

/// Canonical text form, e.g. `-3/2` or `7`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom`; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn min_max<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<(Rational, Rational)> {
    let mut iter = values.into_iter();
    let first = iter.next()?;
    let (mut lo, mut hi) = (first, first);
    for v in iter {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    Some((lo.clone(), hi.clone()))
}


pub(crate) fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer as _;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
