//! Exact rational numbers and their wire format.
//!
//! Integers travel as bare JSON numbers, every other value as a
//! `"numerator/denominator"` string.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(v as i128)
}

/// Parses `"7"`, `"-3"` or `"22/7"`. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i128 = num.parse().map_err(|_| err())?;
    let den: i128 = den.parse().map_err(|_| err())?;
    if den == 0 {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        if let Ok(v) = i64::try_from(*r.numer()) {
            return serde_json::Value::from(v);
        }
    }
    serde_json::Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// `base^exp` with overflow detection.
pub fn checked_pow(base: &Rational, exp: u32) -> Option<Rational> {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for _ in 0..exp {
        num = num.checked_mul(*base.numer())?;
        den = den.checked_mul(*base.denom())?;
    }
    Some(Rational::new(num, den))
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive() && !r.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Serde adapter: `#[serde(with = "crate::rational::wire")]`.
pub mod wire {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        if r.is_integer() {
            if let Ok(v) = i64::try_from(*r.numer()) {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a \"num/den\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(v as i128))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
            Ok(Rational::from_integer(v as i128))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rational, E> {
            Err(E::custom(format!(
                "floating-point value {v} is not allowed"
            )))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("22/7").unwrap(), Rational::new(22, 7));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
        assert_eq!(format_rational(&int(9)), "9");
    }

    #[test]
    fn ceil_of_fraction() {
        assert_eq!(ceil_int(&Rational::new(10, 9)), 2);
        assert_eq!(ceil_int(&int(3)), 3);
    }

    #[test]
    fn pow_overflow_is_detected() {
        assert_eq!(
            checked_pow(&Rational::new(3, 2), 2),
            Some(Rational::new(9, 4))
        );
        assert_eq!(checked_pow(&int(10), 60), None);
    }
}
