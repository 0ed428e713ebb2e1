//! Exact rational numbers for weights and thresholds.
//!
//! Thresholds are accepted as decimals (`11.5`, `-3`, `0.25`) or fractions
//! (`23/2`). Both forms parse to the same exact value.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"23/2"`, `"11.5"`, `"-3"`, `"+0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err())?;
        let den: i64 = den.trim().parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
        || frac.len() > 18
    {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = 10i64.checked_pow(frac.len() as u32).ok_or_else(err)?;
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Canonical exact form: `"3"`, `"-3"`, `"23/2"`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with six digits after the point, rounded half away
/// from zero using integer arithmetic only (platform independent).
pub fn format_decimal(value: &Rational) -> String {
    const PLACES: u32 = 6;
    let scale = 10i128.pow(PLACES);
    let numer = *value.numer() as i128;
    let denom = *value.denom() as i128;
    let scaled = numer.abs() * scale;
    let mut q = scaled / denom;
    if (scaled % denom) * 2 >= denom {
        q += 1;
    }
    let mut out = String::new();
    if value.is_negative() && q != 0 {
        out.push('-');
    }
    let _ = write!(out, "{}.{:06}", q / scale, q % scale);
    out
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `a >= b` without constructing intermediate rationals.
pub(crate) fn numer_ge(numer: i64, denom: i64, bound: &Rational) -> bool {
    (numer as i128) * (*bound.denom() as i128) >= (*bound.numer() as i128) * (denom as i128)
}

pub(crate) fn numer_le(numer: i64, denom: i64, bound: &Rational) -> bool {
    (numer as i128) * (*bound.denom() as i128) <= (*bound.numer() as i128) * (denom as i128)
}

/// Serde adapter storing rationals in their exact string form.
pub mod as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod option_as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_and_fraction_agree() {
        assert_eq!(parse_rational("11.5").unwrap(), parse_rational("23/2").unwrap());
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::new(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), Rational::new(2, 3));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "-", ".", "1e3", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&Rational::new(23, 2)), "23/2");
        assert_eq!(format_rational(&int(-13)), "-13");
        assert_eq!(format_decimal(&Rational::new(23, 2)), "11.500000");
        assert_eq!(format_decimal(&Rational::new(-2, 3)), "-0.666667");
        assert_eq!(format_decimal(&Rational::new(-1, 3_000_000)), "0.000000");
        assert_eq!(format_decimal(&int(0)), "0.000000");
    }

    #[test]
    fn comparisons_are_exact() {
        let bound = Rational::new(23, 2);
        assert!(numer_ge(69, 6, &bound));
        assert!(!numer_ge(68, 6, &bound));
        assert!(numer_le(-18, 6, &int(-3)));
        assert!(!numer_le(-17, 6, &int(-3)));
    }
}
