//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// True when the value is in lowest terms with positive denominator.
pub fn is_canonical(r: &Rational) -> bool {
    use num_integer::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Lossy conversion used only at the figure-emission boundary.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts `"p/q"` strings as well as bare integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum RawRational {
        Str(String),
        Int(i64),
    }

    impl RawRational {
        pub fn into_rational(self) -> Result<Rational> {
            match self {
                RawRational::Str(s) => parse_rational(&s),
                RawRational::Int(i) => Ok(int(i)),
            }
        }
    }
}
