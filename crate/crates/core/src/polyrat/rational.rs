use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PolyError;

/// Arbitrary-precision rational scalar. Always reduced, denominator positive.
pub type BigRat = BigRational;

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-0.25"` or `"1.5e-3"`.
/// Decimals are converted exactly.
pub fn parse_rat(text: &str) -> Result<BigRat, PolyError> {
    let s = text.trim();
    let bad = || PolyError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRat::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRat::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<BigRat> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut value = BigRat::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac.len() as i32;
    let ten = BigRat::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= pow(&ten, scale as u32);
    } else {
        value /= pow(&ten, (-scale) as u32);
    }
    Some(if neg { -value } else { value })
}

pub fn pow(base: &BigRat, exp: u32) -> BigRat {
    num_traits::pow(base.clone(), exp as usize)
}

/// Canonical text: `"p/q"`, or the bare integer when `q = 1`.
pub fn format_rat(r: &BigRat) -> String {
    r.to_string()
}

/// Exact value of a finite `f64` as a rational.
pub fn rat_from_f64(x: f64) -> Option<BigRat> {
    BigRat::from_float(x)
}

pub fn rat_to_f64(r: &BigRat) -> f64 {
    use num_traits::ToPrimitive;
    // Scale into range first so huge numerators/denominators do not overflow.
    let n_bits = r.numer().bits() as i64;
    let d_bits = r.denom().bits() as i64;
    let shift = n_bits - d_bits;
    if n_bits < 1000 && d_bits < 1000 {
        return r.to_f64().unwrap_or(f64::NAN);
    }
    let scaled = if shift > 0 {
        r / BigRat::from_integer(BigInt::one() << shift as usize)
    } else {
        r * BigRat::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

pub fn is_integer(r: &BigRat) -> bool {
    r.denom().is_one()
}

pub fn is_nonnegative_integer(r: &BigRat) -> bool {
    is_integer(r) && !r.is_negative()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde adapters: rationals travel as strings so pipelines never lose exactness.
pub mod serde_rat {
    use super::{format_rat, parse_rat, BigRat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRat, D::Error> {
        let raw = RatRepr::deserialize(d)?;
        raw.into_rat().map_err(D::Error::custom)
    }

    /// Accept `"3/16"`, `"0.25"` and bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RatRepr {
        Text(String),
        Int(i64),
    }

    impl RatRepr {
        pub(crate) fn into_rat(self) -> Result<BigRat, String> {
            match self {
                RatRepr::Text(t) => parse_rat(&t).map_err(|e| e.to_string()),
                RatRepr::Int(i) => Ok(super::int(i)),
            }
        }
    }
}

pub mod serde_rat_vec {
    use super::serde_rat::RatRepr;
    use super::{format_rat, BigRat};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rat(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRat>, D::Error> {
        let raw = Vec::<RatRepr>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rat().map_err(D::Error::custom))
            .collect()
    }
}

pub mod serde_rat_opt {
    use super::serde_rat::RatRepr;
    use super::{format_rat, BigRat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigRat>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_rat(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRat>, D::Error> {
        Option::<RatRepr>::deserialize(d)?
            .map(|r| r.into_rat().map_err(D::Error::custom))
            .transpose()
    }
}
