//! Exact rational arithmetic helpers.
//!
//! Every exact operation in this crate works with arbitrary-precision
//! rationals end to end; floats appear only in the Monte-Carlo and recovery
//! layers. Rationals cross process boundaries as strings, either `"num/den"`
//! or a decimal literal (converted exactly).

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used for all exact computations.
pub type Rational = num::BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` to an exact rational (the "float view").
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational the way it is serialized: `"2/5"`, or `"3"` when the
/// denominator is 1.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"num/den"`, an integer literal, or a decimal literal, all exactly.
///
/// ```
/// use finetti::rational::{parse, rat};
///
/// assert_eq!(parse("3/4").unwrap(), rat(3, 4));
/// assert_eq!(parse("-2").unwrap(), rat(-2, 1));
/// assert_eq!(parse("0.25").unwrap(), rat(1, 4));
/// ```
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_bigint(num)?;
        let den = parse_bigint(den)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        // Decimal literal: whole.frac == (whole * 10^d + frac) / 10^d, exactly.
        let negative = whole.starts_with('-');
        let whole_mag = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal {s:?}")));
        }
        let whole_val = if whole_mag.is_empty() {
            BigInt::zero()
        } else {
            parse_bigint(whole_mag)?
        };
        let scale = num::pow::pow(BigInt::from(10), frac.len());
        let frac_val = parse_bigint(frac)?;
        let magnitude = whole_val * &scale + frac_val;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, scale));
    }
    Ok(Rational::from_integer(parse_bigint(s)?))
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    text.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("not an integer: {:?}", text.trim())))
}

/// Parses a comma-separated list of rationals, e.g. `"1,1/2,1/3"`.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse).collect()
}

/// True when `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse("17/50").unwrap(), rat(17, 50));
        assert_eq!(parse(" 1 ").unwrap(), rat(1, 1));
        assert_eq!(parse("0.34").unwrap(), rat(17, 50));
        assert_eq!(parse("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse(".5").unwrap(), rat(1, 2));
        assert_eq!(parse("2/4").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("a/b").is_err());
        assert!(parse("1.2.3").is_err());
    }

    #[test]
    fn round_trips_through_display() {
        for r in [rat(1, 2), rat(-2, 125), rat(3, 1), rat(0, 5)] {
            assert_eq!(parse(&to_string(&r)).unwrap(), r);
        }
        assert_eq!(to_string(&rat(3, 1)), "3");
        assert_eq!(to_string(&rat(2, 4)), "1/2");
    }
}
