//! Exact rational scalars.
//!
//! Every coordinate and every squared distance in this crate is a `Rational`.
//! Distances are always stored squared, so values like sqrt(2) realized between
//! rational points have an exact representation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational in canonical form: positive denominator,
/// gcd(|numerator|, denominator) = 1. `num_rational::BigRational` maintains
/// exactly this form after every operation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Floor with correct semantics for negatives: floor(-1/2) = -1.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Approximate f64 value, for best-effort output (SVG) only.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses the canonical string form `a` or `a/b`. Rejects zero or negative
    /// denominators and non-canonical fractions such as `2/4`; decimal input
    /// is rejected rather than converted.
    pub fn parse_canonical(s: &str) -> Result<Self, Error> {
        let bad = |msg: &str| Error::BadRational(s.to_string(), msg.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad("empty string"));
        }
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num = BigInt::from_str(num_str).map_err(|_| bad("bad numerator"))?;
        let den = match den_str {
            None => BigInt::one(),
            Some(d) => BigInt::from_str(d).map_err(|_| bad("bad denominator"))?,
        };
        if den.sign() != Sign::Plus {
            return Err(bad("denominator must be positive"));
        }
        if !num.gcd(&den).is_one() {
            return Err(bad("not in lowest terms"));
        }
        Ok(Rational(BigRational::new_raw(num, den)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Rational::parse_canonical(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Rational::parse_canonical(&s).map_err(D::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialOrd<Rational> for &Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<Rational> for &Rational {
    fn eq(&self, other: &Rational) -> bool {
        self.0 == other.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(Rational::parse_canonical("3/4").unwrap(), Rational::ratio(3, 4));
        assert_eq!(Rational::parse_canonical("-7").unwrap(), Rational::from_int(-7));
        assert_eq!(Rational::ratio(3, 4).to_string(), "3/4");
        assert_eq!(Rational::from_int(5).to_string(), "5");
        assert_eq!(Rational::ratio(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn parse_rejects_non_canonical() {
        assert!(Rational::parse_canonical("2/4").is_err());
        assert!(Rational::parse_canonical("1/0").is_err());
        assert!(Rational::parse_canonical("1/-2").is_err());
        assert!(Rational::parse_canonical("0.5").is_err());
        assert!(Rational::parse_canonical("").is_err());
        assert!(Rational::parse_canonical("-0/3").is_err());
    }

    #[test]
    fn floor_negative() {
        assert_eq!(Rational::ratio(-1, 2).floor_int(), BigInt::from(-1));
        assert_eq!(Rational::ratio(7, 2).floor_int(), BigInt::from(3));
        assert_eq!(Rational::from_int(-3).floor_int(), BigInt::from(-3));
    }

    #[test]
    fn arithmetic_canonical() {
        let x = Rational::ratio(1, 6);
        let y = Rational::ratio(1, 3);
        let s = &x + &y;
        assert_eq!(s, Rational::ratio(1, 2));
        assert_eq!(s.numer(), &BigInt::from(1));
        assert_eq!(s.denom(), &BigInt::from(2));
    }
}
