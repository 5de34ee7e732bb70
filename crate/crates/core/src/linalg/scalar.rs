//! Coefficient rings and their exact scalars.
//!
//! A [`Scalar`] is a plain value; all arithmetic goes through the
//! [`CoeffRing`] that owns it, so a single representation serves prime
//! fields, the rationals and the integers. Small integers stay inline and
//! only spill into arbitrary precision when an operation would overflow.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The ring `R` over which modules and maps are defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    /// The prime field with the given characteristic.
    Prime(u32),
    Rationals,
    Integers,
}

/// An exact ring element.
///
/// Canonical form: `Big` never holds a value that fits in `Int`, and
/// elements of a prime field are always `Int` in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(i64),
    Big(BigRational),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Int(0);
    pub const ONE: Scalar = Scalar::Int(1);

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Int(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Int(1))
    }

    fn from_big(r: BigRational) -> Scalar {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Scalar::Int(v);
            }
        }
        Scalar::Big(r)
    }

    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Big(r) => r.clone(),
        }
    }

    /// The value as an integer, if it is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(BigInt::from(*v)),
            Scalar::Big(r) if r.is_integer() => Some(r.numer().clone()),
            Scalar::Big(_) => None,
        }
    }

    pub fn from_bigint(v: BigInt) -> Scalar {
        match v.to_i64() {
            Some(small) => Scalar::Int(small),
            None => Scalar::Big(BigRational::from_integer(v)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Big(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = LinalgError;

    /// Parses `"3"`, `"-7"` or `"2/5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LinalgError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Scalar::from_bigint(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = n.trim().parse::<BigInt>().map_err(|_| bad())?;
                let d = d.trim().parse::<BigInt>().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::from_big(BigRational::new(n, d)))
            }
        }
    }
}

impl CoeffRing {
    /// Checks the characteristic of a prime field.
    pub fn prime(p: u32) -> Result<CoeffRing, LinalgError> {
        if p < 2 || p >= (1 << 31) || !(2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(CoeffRing::Prime(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Integers)
    }

    /// The field in which ranks are computed: `Q` for `Z`, the ring itself otherwise.
    pub fn rank_field(&self) -> CoeffRing {
        match self {
            CoeffRing::Integers => CoeffRing::Rationals,
            other => *other,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoeffRing::Prime(p) => Scalar::Int(v.rem_euclid(*p as i64)),
            _ => Scalar::Int(v),
        }
    }

    /// Brings an arbitrary scalar into this ring's canonical form.
    ///
    /// Fails for a fraction in `Z`, or a fraction whose denominator
    /// vanishes mod `p`.
    pub fn reduce(&self, s: &Scalar) -> Result<Scalar, LinalgError> {
        match (self, s) {
            (CoeffRing::Prime(p), Scalar::Int(v)) => Ok(Scalar::Int(v.rem_euclid(*p as i64))),
            (CoeffRing::Prime(p), Scalar::Big(r)) => {
                let p_big = BigInt::from(*p);
                let n = r.numer().mod_floor(&p_big).to_i64().unwrap();
                let d = r.denom().mod_floor(&p_big).to_i64().unwrap();
                if d == 0 {
                    return Err(LinalgError::NotInRing(s.to_string()));
                }
                Ok(Scalar::Int(n * inv_mod(d, *p as i64) % *p as i64))
            }
            (CoeffRing::Integers, Scalar::Big(r)) if !r.is_integer() => {
                Err(LinalgError::NotInRing(s.to_string()))
            }
            _ => Ok(s.clone()),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoeffRing::Prime(p), Scalar::Int(x), Scalar::Int(y)) => {
                let s = x + y;
                Scalar::Int(if s >= *p as i64 { s - *p as i64 } else { s })
            }
            (_, Scalar::Int(x), Scalar::Int(y)) => match x.checked_add(*y) {
                Some(s) => Scalar::Int(s),
                None => Scalar::from_big(a.to_big() + b.to_big()),
            },
            _ => Scalar::from_big(a.to_big() + b.to_big()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (CoeffRing::Prime(p), Scalar::Int(x)) => Scalar::Int(if *x == 0 { 0 } else { *p as i64 - x }),
            (_, Scalar::Int(x)) => match x.checked_neg() {
                Some(v) => Scalar::Int(v),
                None => Scalar::from_big(-a.to_big()),
            },
            (_, Scalar::Big(r)) => Scalar::from_big(-r.clone()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoeffRing::Prime(p), Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y % *p as i64),
            (_, Scalar::Int(x), Scalar::Int(y)) => match x.checked_mul(*y) {
                Some(v) => Scalar::Int(v),
                None => Scalar::from_big(a.to_big() * b.to_big()),
            },
            _ => Scalar::from_big(a.to_big() * b.to_big()),
        }
    }

    /// Multiplicative inverse; over `Z` only units are invertible.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (CoeffRing::Prime(p), Scalar::Int(x)) => Some(Scalar::Int(inv_mod(*x, *p as i64))),
            (CoeffRing::Integers, Scalar::Int(x)) if x.abs() == 1 => Some(a.clone()),
            (CoeffRing::Integers, _) => None,
            (_, Scalar::Int(1)) | (_, Scalar::Int(-1)) => Some(a.clone()),
            _ => Some(Scalar::from_big(a.to_big().recip())),
        }
    }

    /// `a / b`, when `b` is invertible.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if b.is_one() {
            return Some(a.clone());
        }
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Integer absolute value (for pivot selection in integral elimination).
    pub fn abs_int(&self, a: &Scalar) -> BigInt {
        a.to_bigint().map(|v| v.abs()).unwrap_or_else(BigInt::one)
    }

    pub fn name(&self) -> String {
        match self {
            CoeffRing::Prime(2) => "f2".into(),
            CoeffRing::Prime(p) => format!("fp:{p}"),
            CoeffRing::Rationals => "q".into(),
            CoeffRing::Integers => "z".into(),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CoeffRing {
    type Err = LinalgError;

    /// Accepts `q`, `z`, `f2` and `fp:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(CoeffRing::Rationals),
            "z" => Ok(CoeffRing::Integers),
            "f2" => Ok(CoeffRing::Prime(2)),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| LinalgError::Parse(s.to_string()))?;
                CoeffRing::prime(p)
            }
        }
    }
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = CoeffRing::Prime(7);
        let a = f.from_i64(-3);
        assert_eq!(a, Scalar::Int(4));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), Scalar::ONE);
        assert_eq!(f.add(&Scalar::Int(5), &Scalar::Int(4)), Scalar::Int(2));
        assert_eq!(f.neg(&Scalar::Int(0)), Scalar::ZERO);
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let q = CoeffRing::Rationals;
        let big = q.mul(&Scalar::Int(i64::MAX), &Scalar::Int(4));
        assert!(matches!(big, Scalar::Big(_)));
        let back = q.div(&big, &Scalar::Int(4)).unwrap();
        assert_eq!(back, Scalar::Int(i64::MAX));
        let half = q.inv(&Scalar::Int(2)).unwrap();
        assert_eq!(q.add(&half, &half), Scalar::ONE);
    }

    #[test]
    fn integers_invert_only_units() {
        let z = CoeffRing::Integers;
        assert_eq!(z.inv(&Scalar::Int(-1)), Some(Scalar::Int(-1)));
        assert_eq!(z.inv(&Scalar::Int(2)), None);
        assert!(z.reduce(&"1/2".parse().unwrap()).is_err());
    }

    #[test]
    fn parse_rings() {
        assert_eq!("f2".parse::<CoeffRing>().unwrap(), CoeffRing::Prime(2));
        assert_eq!("fp:5".parse::<CoeffRing>().unwrap(), CoeffRing::Prime(5));
        assert!("fp:6".parse::<CoeffRing>().is_err());
        assert_eq!("Q".parse::<CoeffRing>().unwrap(), CoeffRing::Rationals);
    }

    #[test]
    fn reduce_fraction_mod_p() {
        let f = CoeffRing::Prime(5);
        let third: Scalar = "1/3".parse().unwrap();
        let r = f.reduce(&third).unwrap();
        assert_eq!(f.mul(&r, &Scalar::Int(3)), Scalar::ONE);
    }
}
