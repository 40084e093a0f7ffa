//! Exact number literals: parsing `"p/q"` strings and integers, printing
//! rationals back, and the one decimal rule used for drawn coordinates.

use std::str::FromStr;

use nobodies::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{CliError, Result};

/// Significant digits of every coordinate written to SVG.
pub const SIGNIFICANT_DIGITS: usize = 20;

/// Parses `"p/q"`, `"p"` or a JSON integer. Floats are rejected: they are not exact.
pub fn parse_rational(v: &Value, field: &str) -> Result<Rational> {
    let bad = |text: String| CliError::BadRational {
        field: field.to_string(),
        text,
    };
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_i64(i)),
            None => match n.as_u64() {
                Some(u) => Ok(Rational::from_integer(BigInt::from(u))),
                None => Err(bad(n.to_string())),
            },
        },
        Value::String(s) => parse_rational_str(s).ok_or_else(|| bad(s.clone())),
        other => Err(CliError::schema(field, format!("expected a rational, found {other}"))),
    }
}

pub fn parse_rational_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = parse_int(p)?;
    let q = parse_int(q)?;
    if q.is_zero() {
        return None;
    }
    Some(Rational::new(p, q))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// An integer given as a JSON number or an integral rational string.
pub fn parse_i64(v: &Value, field: &str) -> Result<i64> {
    let r = parse_rational(v, field)?;
    r.as_integer_i64()
        .ok_or_else(|| CliError::schema(field, format!("expected an integer, found {r}")))
}

/// Canonical text form: `"p"` or `"p/q"` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Decimal with [`SIGNIFICANT_DIGITS`] significant digits, rounded half away
/// from zero, trailing zeros dropped, never in exponent notation.
pub fn decimal(r: &Rational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // e with 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    if scaled_cmp(&num, &den, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    let shift = SIGNIFICANT_DIGITS as i64 - 1 - e;
    let (n, d) = if shift >= 0 {
        (num * pow10(shift as u32), den)
    } else {
        (num, den * pow10((-shift) as u32))
    };
    let (q, rem) = n.div_rem(&d);
    let mut digits = if rem.clone() * 2 >= d { q + BigInt::one() } else { q };
    if digits == pow10(SIGNIFICANT_DIGITS as u32) {
        digits /= 10;
        e += 1;
    }
    let s = digits.to_string();
    let body = if e >= SIGNIFICANT_DIGITS as i64 - 1 {
        format!("{s}{}", "0".repeat((e + 1) as usize - SIGNIFICANT_DIGITS))
    } else if e >= 0 {
        let (int, frac) = s.split_at(e as usize + 1);
        trim_fraction(int, frac)
    } else {
        let frac = format!("{}{s}", "0".repeat((-e - 1) as usize));
        trim_fraction("0", &frac)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(int: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u8).pow(k)
}

/// Compares `num/den` with `10^e`.
fn scaled_cmp(num: &BigInt, den: &BigInt, e: i64) -> std::cmp::Ordering {
    if e >= 0 {
        num.cmp(&(den * pow10(e as u32)))
    } else {
        (num * pow10((-e) as u32)).cmp(den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn q(s: &str) -> Rational {
        parse_rational_str(s).unwrap()
    }

    #[test]
    fn parses_exact_literals() {
        assert_eq!(parse_rational(&json!(3), "x").unwrap(), Rational::from_i64(3));
        assert_eq!(parse_rational(&json!("-6/4"), "x").unwrap(), Rational::ratio(-3, 2));
        assert_eq!(parse_rational(&json!(" 7 "), "x").unwrap(), Rational::from_i64(7));
        for bad in [json!("1/0"), json!("1.5"), json!(""), json!("1/"), json!("a/2"), json!(1.5)] {
            let err = parse_rational(&bad, "payload.lambda.P").unwrap_err();
            assert_eq!(err.code(), "BadRational", "{bad}");
        }
        assert_eq!(parse_rational(&json!(true), "x").unwrap_err().code(), "SchemaError");
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&q("4/8")), "1/2");
        assert_eq!(format_rational(&q("-4")), "-4");
        assert_eq!(parse_rational_str(&format_rational(&q("-22/7"))), Some(q("-22/7")));
    }

    #[test]
    fn twenty_significant_digits() {
        assert_eq!(decimal(&q("0")), "0");
        assert_eq!(decimal(&q("1/2")), "0.5");
        assert_eq!(decimal(&q("1/3")), "0.33333333333333333333");
        assert_eq!(decimal(&q("2/3")), "0.66666666666666666667");
        assert_eq!(decimal(&q("-200/3")), "-66.666666666666666667");
        assert_eq!(decimal(&q("1/300")), "0.0033333333333333333333");
        assert_eq!(decimal(&q("600")), "600");
        assert_eq!(decimal(&q("123456789012345678901234")), "123456789012345678900000");
        assert_eq!(decimal(&q("99999999999999999999999/10")), "10000000000000000000000");
        assert_eq!(decimal(&q("9/10")), "0.9");
    }
}
