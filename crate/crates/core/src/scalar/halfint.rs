use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::ParseError;

/// A number in ½ℤ, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn is_zero(self) -> bool {
        self.twice == 0
    }

    /// The integer value, if this is an integer.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

/// Scaling by an integer.
impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt { twice: self.twice * rhs }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `3`, `-3/2`, `1.5`, `.5`.
impl FromStr for HalfInt {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseError::HalfInt(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return match d {
                1 => Ok(HalfInt::from_int(n)),
                2 => Ok(HalfInt::from_twice(n)),
                -1 => Ok(HalfInt::from_int(-n)),
                -2 => Ok(HalfInt::from_twice(-n)),
                _ if d != 0 && (2 * n) % d == 0 => Ok(HalfInt::from_twice(2 * n / d)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int_part: i64 = match int.trim() {
                "" | "+" => 0,
                "-" => 0,
                other => other.parse().map_err(|_| bad())?,
            };
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let twice = 2 * int_part.abs() + half;
            return Ok(HalfInt::from_twice(if neg { -twice } else { twice }));
        }
        s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_spellings() {
        assert_eq!("3".parse::<HalfInt>().unwrap(), HalfInt::from_int(3));
        assert_eq!("1/2".parse::<HalfInt>().unwrap(), HalfInt::HALF);
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-3));
        assert_eq!(".5".parse::<HalfInt>().unwrap(), HalfInt::HALF);
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-0.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-1));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
    }

    #[test]
    fn integrality_tracks_parity() {
        let a = HalfInt::HALF;
        assert!(!a.is_integer());
        assert!((a + a).is_integer());
        assert_eq!((a + a).to_int(), Some(1));
        assert_eq!(format!("{}", HalfInt::from_twice(-5)), "-5/2");
    }
}
