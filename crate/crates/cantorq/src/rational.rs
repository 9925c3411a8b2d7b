//! Exact rational arithmetic used throughout the crate.
//!
//! All measure-theoretic quantities (masses, lengths, weights, errors) are
//! arbitrary-precision rationals kept in lowest terms with a positive
//! denominator; there is no floating point on any computational path.
//! Doubles appear only as an advisory `approx` field in serialized output.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational, always normalized (lowest terms, positive
/// denominator). `num_rational::Ratio` re-normalizes after every operation,
/// which is exactly the invariant we need.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a rational base and machine-size exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    Rational::new(base.numer().pow(exp), base.denom().pow(exp))
}

/// Binomial coefficient C(n, k) as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Best-effort IEEE double approximation (advisory only).
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range ratios: fall back on a crude magnitude estimate.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// A rational rendered for machine-readable output: exact numerator and
/// denominator as decimal strings plus the advisory double.
#[derive(Debug, Clone)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Rational", 3)?;
        s.serialize_field("num", &self.0.numer().to_string())?;
        s.serialize_field("den", &self.0.denom().to_string())?;
        s.serialize_field("approx", &approx(&self.0))?;
        s.end()
    }
}

impl From<&Rational> for JsonRational {
    fn from(r: &Rational) -> Self {
        JsonRational(r.clone())
    }
}

/// Wire form accepted wherever a rational is read back in: the object form
/// produced by [`JsonRational`], a string (`"13/612"`, `"0.125"`, `"5"`), or
/// a bare JSON number.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Object {
        num: String,
        den: String,
        #[serde(default)]
        #[allow(dead_code)]
        approx: Option<f64>,
    },
    Text(String),
    Number(f64),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<Rational, Error> {
        match self {
            RationalInput::Object { num, den, .. } => {
                let n = parse_bigint(num)?;
                let d = parse_bigint(den)?;
                if d.is_zero() {
                    return Err(Error::BadRational(format!("{num}/{den}: zero denominator")));
                }
                Ok(Rational::new(n, d))
            }
            RationalInput::Text(s) => parse_rational(s),
            RationalInput::Number(x) => Rational::from_float(*x)
                .ok_or_else(|| Error::BadRational(format!("{x} is not finite"))),
        }
    }
}

fn parse_bigint(s: &str) -> Result<BigInt, Error> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::BadRational(format!("invalid integer {s:?}")))
}

/// Bit-exact parse of `"a/b"`, decimal (`"0.125"`, `"-3.5"`), or integer text.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::BadRational("empty string".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_bigint(n)?;
        let den = parse_bigint(d)?;
        if den.is_zero() {
            return Err(Error::BadRational(format!("{s}: zero denominator")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            parse_bigint(whole)?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::BadRational(format!("invalid decimal {s:?}")));
        }
        let digits = parse_bigint(frac)?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rational::new(digits, scale);
        let whole_part = Rational::from_integer(whole);
        return Ok(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    Ok(Rational::from_integer(parse_bigint(s)?))
}
