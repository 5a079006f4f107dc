use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime modulus `2 <= p < 2^31`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u64 {
        self.0 as u64
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(Prime),
}

impl Field {
    pub fn fp(p: u64) -> Result<Field> {
        Prime::new(p).map(Field::Prime)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p.get(),
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue(v.rem_euclid(p.get() as i64) as u64),
        }
    }

    /// Parses `"a"`, `"a/b"` (rationals) or `"r"` with `0 <= r < p` (prime fields).
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let bad = || Error::InvalidEntry(s.to_string());
        match self {
            Field::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (
                        BigInt::from_str(a.trim()).map_err(|_| bad())?,
                        BigInt::from_str(b.trim()).map_err(|_| bad())?,
                    ),
                    None => (BigInt::from_str(s.trim()).map_err(|_| bad())?, BigInt::one()),
                };
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let v = u64::from_str(s.trim()).map_err(|_| bad())?;
                self.residue(v).ok_or_else(|| {
                    Error::InvalidEntry(format!("{s} not in [0, {})", p.get()))
                })
            }
        }
    }

    /// A residue already in `[0, p)`, or `None`.
    pub fn residue(self, v: u64) -> Option<Scalar> {
        match self {
            Field::Prime(p) if v < p.get() => Some(Scalar::Residue(v)),
            _ => None,
        }
    }

    pub fn contains(self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Residue(r)) => *r < p.get(),
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{}", p.get()),
        }
    }
}

/// A single field element. Rationals are always kept in lowest terms
/// with positive denominator (guaranteed by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    /// Integer value, when the scalar is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Residue(r) => Some(*r as i64),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => {
                let sign = if q.is_negative() { "-" } else { "" };
                write!(f, "{}{}/{}", sign, q.numer().abs(), q.denom())
            }
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_checked() {
        assert!(Field::fp(5).is_ok());
        assert!(Field::fp(2).is_ok());
        assert_eq!(Field::fp(4), Err(Error::NotPrime(4)));
        assert_eq!(Field::fp(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(Field::fp(1 << 31), Err(Error::ModulusOutOfRange(1 << 31)));
        assert!(Field::fp(2147483647).is_ok());
    }

    #[test]
    fn rational_parsing_normalizes() {
        let q = Field::Rationals;
        assert_eq!(q.parse_scalar("4/-6").unwrap().to_string(), "-2/3");
        assert_eq!(q.parse_scalar("6/3").unwrap().to_string(), "2");
        assert_eq!(q.parse_scalar("-0/7").unwrap().to_string(), "0");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("x").is_err());
    }

    #[test]
    fn residues_are_range_checked() {
        let f5 = Field::fp(5).unwrap();
        assert_eq!(f5.parse_scalar("4").unwrap(), Scalar::Residue(4));
        assert!(f5.parse_scalar("5").is_err());
        assert!(f5.parse_scalar("-1").is_err());
        assert_eq!(f5.from_i64(-1), Scalar::Residue(4));
    }
}
