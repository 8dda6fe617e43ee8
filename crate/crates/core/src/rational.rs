//! Exact rational numbers.
//!
//! Preference entries and voter fractions are small-denominator rationals, so
//! a reduced `i64` ratio is plenty. Parsing accepts `"a/b"`, plain integers
//! and finite decimals such as `"0.5"`, all converted exactly.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A reduced fraction with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));
    pub const HALF: Rational = Rational(Ratio::new_raw(1, 2));

    /// Builds `numerator / denominator` in lowest terms.
    ///
    /// Panics if `denominator` is zero.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Rational(Ratio::new(numerator, denominator))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True for 0 and 1.
    pub fn is_unanimous(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    pub fn is_half(&self) -> bool {
        *self == Self::HALF
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self::ONE - *self
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

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64, Error> {
    if s.is_empty() {
        return Err(Error::Parse(format!("malformed rational {whole:?}")));
    }
    s.parse::<i64>()
        .map_err(|_| Error::Parse(format!("malformed rational {whole:?}")))
}

fn parse_decimal(s: &str, whole: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(format!("malformed rational {whole:?}"));
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').ok_or_else(bad)?;
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numerator: i64 = digits.parse().map_err(|_| bad())?;
    let mut denominator: i64 = 1;
    for _ in 0..frac_part.len() {
        denominator = denominator.checked_mul(10).ok_or_else(bad)?;
    }
    if negative {
        numerator = -numerator;
    }
    Ok(Rational::new(numerator, denominator))
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_int(num.trim(), text)?;
            let den = parse_int(den.trim(), text)?;
            if den == 0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(num, den))
        } else if s.contains('.') {
            parse_decimal(s, text)
        } else {
            Ok(Rational::from_integer(parse_int(s, text)?))
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(Rational::from_integer(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!("1/2".parse::<Rational>().unwrap(), Rational::HALF);
        assert_eq!("2/4".parse::<Rational>().unwrap(), Rational::HALF);
        assert_eq!("0.5".parse::<Rational>().unwrap(), Rational::HALF);
        assert_eq!(".25".parse::<Rational>().unwrap(), Rational::new(1, 4));
        assert_eq!("1".parse::<Rational>().unwrap(), Rational::ONE);
        assert_eq!(" 0 ".parse::<Rational>().unwrap(), Rational::ZERO);
        assert_eq!("-3/6".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert_eq!("3/-6".parse::<Rational>().unwrap(), Rational::new(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/", "/2", "1/0", "a/b", "0.5.1", ".", "1e3", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn canonical_form() {
        let r = Rational::new(6, -8);
        assert_eq!(r.numerator(), -3);
        assert_eq!(r.denominator(), 4);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
    }

    #[test]
    fn serde_as_string() {
        let json = serde_json::to_string(&Rational::new(1, 3)).unwrap();
        assert_eq!(json, "\"1/3\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Rational::new(1, 3));
        let from_int: Rational = serde_json::from_str("1").unwrap();
        assert_eq!(from_int, Rational::ONE);
    }
}
