//! Exact rational helpers: parsing, formatting and serde adapters.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational used for every storage and bandwidth quantity.
pub type Rational = num_rational::Ratio<i64>;

/// Build a rational from an integer.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Build a rational `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Parse `"p/q"`, an integer, or a decimal such as `"0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let exp = u32::try_from(frac.len()).map_err(|_| bad())?;
    let den = 10i64.checked_pow(exp).ok_or_else(bad)?;
    let value = Rational::new(num, den);
    Ok(if neg { -value } else { value })
}

/// `"p/q"`, or just `"p"` for integers.
pub fn to_fraction_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Terminating decimal expansion, if one exists.
pub fn to_exact_decimal(r: &Rational) -> Option<String> {
    let mut den = *r.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(r.numer().to_string());
    }
    let scale = 10i64.checked_pow(places)?;
    let scaled = (r * int(scale)).to_integer();
    let (q, rem) = scaled.abs().div_rem(&scale);
    let mut out = String::new();
    if r.is_negative() {
        out.push('-');
    }
    let _ = write!(out, "{q}.{:0width$}", rem, width = places as usize);
    let trimmed = out.trim_end_matches('0').trim_end_matches('.').to_string();
    Some(trimmed)
}

/// Decimal when exact, otherwise `"p/q"`.
pub fn to_csv_string(r: &Rational) -> String {
    to_exact_decimal(r).unwrap_or_else(|| to_fraction_string(r))
}

pub(crate) fn is_non_negative(r: &Rational) -> bool {
    !r.is_negative()
}

pub(crate) fn min(a: Rational, b: Rational) -> Rational {
    if a < b {
        a
    } else {
        b
    }
}

pub(crate) fn sum<I: IntoIterator<Item = Rational>>(items: I) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod as_fraction {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as `["p/q", ...]`.
pub mod vec_as_fraction {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(to_fraction_string).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct NumDen {
    num: i64,
    den: i64,
}

/// Serde adapter writing rationals as `{"num":p,"den":q}`.
pub mod as_num_den {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        NumDen { num: *r.numer(), den: *r.denom() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let nd = NumDen::deserialize(d)?;
        if nd.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(nd.num, nd.den))
    }
}

/// Same as [`as_num_den`] for optional values (`null` when absent).
pub mod opt_as_num_den {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.map(|r| NumDen { num: *r.numer(), den: *r.denom() }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let nd = Option::<NumDen>::deserialize(d)?;
        match nd {
            None => Ok(None),
            Some(nd) if nd.den == 0 => Err(serde::de::Error::custom("zero denominator")),
            Some(nd) => Ok(Some(Rational::new(nd.num, nd.den))),
        }
    }
}
