//! Serde adapters: big integers and rationals travel as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};
use std::str::FromStr;

pub fn parse_int(s: &str) -> Result<BigInt, String> {
    BigInt::from_str(s.trim()).map_err(|_| format!("not an integer: {s:?}"))
}

/// Accepts `"p/q"`, `"p"` or a decimal literal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("not a rational: {s:?}"));
        }
        let neg = int.starts_with('-');
        let whole = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            parse_int(int)?.abs()
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let num = whole * &den + parse_int(frac)?;
        let r = BigRational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let r = BigRational::from_str(s).map_err(|_| format!("not a rational: {s:?}"))?;
    Ok(r)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = IntOrString::deserialize(d)?;
        raw.into_bigint().map_err(de::Error::custom)
    }
}

pub mod int_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<IntOrString>::deserialize(d)?;
        raw.into_iter()
            .map(|x| x.into_bigint().map_err(de::Error::custom))
            .collect()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = IntOrString::deserialize(d)?;
        match raw {
            IntOrString::Int(i) => Ok(BigRational::from_integer(BigInt::from(i))),
            IntOrString::Str(s) => parse_rational(&s).map_err(de::Error::custom),
        }
    }
}

/// Integers may be written bare when they fit in an `i64`.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum IntOrString {
    Int(i64),
    Str(String),
}

impl IntOrString {
    pub(crate) fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            IntOrString::Int(i) => Ok(BigInt::from(i)),
            IntOrString::Str(s) => parse_int(&s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_forms() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational("4").unwrap(), q(4, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
