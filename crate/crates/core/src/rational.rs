//! Exact rational numbers for weights, thresholds and scores.
//!
//! Scores are small dyadic rationals scaled by configured weights such as
//! `1.2`, so they are kept exact end to end. Comparisons against thresholds
//! never see floating point rounding.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest number of significant decimal digits accepted by the parser.
const MAX_DECIMAL_DIGITS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational number {input:?}: {reason}")]
pub struct ParseRationalError {
    input: String,
    reason: &'static str,
}

impl ParseRationalError {
    fn new(input: &str, reason: &'static str) -> Self {
        Self {
            input: input.to_string(),
            reason,
        }
    }
}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Divides by `2^exponent`.
    pub fn halved(self, exponent: u32) -> Self {
        Rational(self.0 / Ratio::from_integer(1i64 << exponent))
    }

    /// Converts a finite float through its shortest round-trip decimal
    /// rendering, so `1.2` becomes exactly `6/5`.
    pub fn from_f64(value: f64) -> Result<Self, ParseRationalError> {
        if !value.is_finite() {
            return Err(ParseRationalError::new(&value.to_string(), "not finite"));
        }
        format!("{value}").parse()
    }

    /// True when the value has a terminating decimal expansion.
    pub fn is_decimal(&self) -> bool {
        let mut d = self.denom();
        while d % 2 == 0 {
            d /= 2;
        }
        while d % 5 == 0 {
            d /= 5;
        }
        d == 1
    }

    /// Renders with exactly `digits` fractional digits, rounding half away
    /// from zero.
    pub fn to_fixed(&self, digits: u32) -> String {
        let scale = 10i128.pow(digits);
        let n = self.numer() as i128 * scale;
        let d = self.denom() as i128;
        let q = n / d;
        let r = n % d;
        let rounded = if 2 * r.abs() >= d { q + n.signum() } else { q };
        let sign = if rounded < 0 { "-" } else { "" };
        let abs = rounded.abs();
        if digits == 0 {
            return format!("{sign}{abs}");
        }
        let int = abs / scale;
        let frac = abs % scale;
        format!("{sign}{int}.{frac:0width$}", width = digits as usize)
    }

    fn parse_decimal(s: &str) -> Result<Self, ParseRationalError> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseRationalError::new(s, "no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(ParseRationalError::new(s, "unexpected character"));
        }
        let digits = format!("{int_part}{frac_part}");
        let significant = digits.trim_start_matches('0');
        if significant.len() > MAX_DECIMAL_DIGITS || frac_part.len() > MAX_DECIMAL_DIGITS {
            return Err(ParseRationalError::new(s, "too many digits"));
        }
        let numer: i64 = if significant.is_empty() {
            0
        } else {
            significant
                .parse()
                .map_err(|_| ParseRationalError::new(s, "out of range"))?
        };
        let denom = 10i64.pow(frac_part.len() as u32);
        let value = Ratio::new(numer, denom);
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts decimals (`1.2`, `-0.5`, `3`) and fractions (`6/5`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| ParseRationalError::new(s, "bad numerator"))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| ParseRationalError::new(s, "bad denominator"))?;
            if d == 0 {
                return Err(ParseRationalError::new(s, "zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        Rational::parse_decimal(s)
    }
}

impl fmt::Display for Rational {
    /// Terminating values print as decimals (`1.5`), others as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            return write!(f, "{}", self.numer());
        }
        if self.is_decimal() {
            let mut digits = 1;
            loop {
                let s = self.to_fixed(digits);
                if s.parse::<Rational>().ok() == Some(*self) {
                    return f.write_str(&s);
                }
                digits += 1;
            }
        }
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, v| acc + v)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_decimal() {
            let text = self.to_string();
            let as_float = self.to_f64();
            // Only emit a JSON number when it reads back to the same value.
            if Rational::from_f64(as_float).ok() == Some(*self) && text.len() <= 18 {
                return serializer.serialize_f64(as_float);
            }
        }
        serializer.serialize_str(&format!("{}/{}", self.numer(), self.denom()))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a string such as \"1.2\" or \"6/5\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                i64::try_from(v)
                    .map(Rational::from_integer)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Rational::from_f64(v).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}
