//! Exact rationals and p-adic valuations.
//!
//! Everything metric in the crate is measured in additive notation:
//! a disk of radius `p^{-r}` is stored through its radius-valuation `r`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer value, if this rational is an integer that fits an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    /// Panics on a zero divisor, like integer division.
    fn div(self, rhs: &Rational) -> Rational {
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|_| Error::invalid(format!("not a rational: {s:?}")));
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_i64() {
            Some(n) => serializer.serialize_i64(n),
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"num/den\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        Rational::from_str(v).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

/// Additive valuation: a rational or `+∞` (the valuation of zero).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// `self >= bound` for a finite bound.
    pub fn at_least(&self, bound: &Rational) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinity => true,
        }
    }
}

impl From<Rational> for Valuation {
    fn from(v: Rational) -> Self {
        Valuation::Finite(v)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl PartialEq<Rational> for Valuation {
    fn eq(&self, other: &Rational) -> bool {
        self.finite() == Some(other)
    }
}

impl PartialOrd<Rational> for Valuation {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Valuation::Finite(v) => v.cmp(other),
            Valuation::Infinity => Ordering::Greater,
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => v.serialize(serializer),
            Valuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(Valuation::Finite(Rational::from(n))),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinity),
            Raw::Str(s) => Rational::from_str(&s).map(Valuation::Finite).map_err(de::Error::custom),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A validated prime number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::invalid(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// Exponent of `p` in a nonzero integer.
    pub fn int_valuation(self, n: &BigInt) -> Option<u64> {
        if n.is_zero() {
            return None;
        }
        let p = self.as_big();
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return Some(k);
            }
            n = q;
            k += 1;
        }
    }

    pub fn valuation(self, q: &Rational) -> Valuation {
        match self.int_valuation(q.numer()) {
            None => Valuation::Infinity,
            Some(num) => {
                let den = self.int_valuation(q.denom()).unwrap_or(0);
                Valuation::Finite(Rational::from_integer(BigInt::from(num) - BigInt::from(den)))
            }
        }
    }

    /// `p^k` as a big integer.
    pub fn pow(self, k: u64) -> BigInt {
        num_traits::pow(self.as_big(), k as usize)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(deserializer)?;
        Prime::new(p).map_err(de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The p-adic valuation of a rational number; `vp(0) = ∞`.
pub fn vp(q: &Rational, p: u64) -> Result<Valuation> {
    Ok(Prime::new(p)?.valuation(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&q(8, 1), 2).unwrap(), Valuation::Finite(q(3, 1)));
        assert_eq!(vp(&q(3, 4), 2).unwrap(), Valuation::Finite(q(-2, 1)));
        assert_eq!(vp(&q(0, 1), 5).unwrap(), Valuation::Infinity);
    }

    #[test]
    fn non_prime_is_rejected() {
        assert!(matches!(vp(&q(8, 1), 4), Err(Error::InvalidArgument(_))));
        assert!(vp(&q(8, 1), 1).is_err());
        assert!(vp(&q(8, 1), 0).is_err());
    }

    #[test]
    fn infinity_absorbs_and_dominates() {
        let inf = Valuation::Infinity;
        let three = Valuation::Finite(q(3, 1));
        assert_eq!(inf.clone() + three.clone(), Valuation::Infinity);
        assert!(inf > three);
        assert!(inf > q(1000, 1));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("6/-4".parse::<Rational>().unwrap(), q(-3, 2));
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_forms() {
        let v: Vec<Rational> = serde_json::from_str(r#"[3, "5/10", "-7"]"#).unwrap();
        assert_eq!(v, vec![q(3, 1), q(1, 2), q(-7, 1)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[3,"1/2",-7]"#);
        let inf: Valuation = serde_json::from_str(r#""inf""#).unwrap();
        assert_eq!(inf, Valuation::Infinity);
        assert_eq!(serde_json::to_string(&inf).unwrap(), r#""inf""#);
        let huge = Rational::from_integer(BigInt::from(10).pow(30));
        let s = serde_json::to_string(&huge).unwrap();
        assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), huge);
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
    }

    fn prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11])
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(a in rational(), b in rational(), p in prime()) {
            let lhs = vp(&(&a * &b), p).unwrap();
            let rhs = vp(&a, p).unwrap() + vp(&b, p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ultrametric_inequality(a in rational(), b in rational(), p in prime()) {
            let va = vp(&a, p).unwrap();
            let vb = vp(&b, p).unwrap();
            let vs = vp(&(&a + &b), p).unwrap();
            let lo = va.clone().min(vb.clone());
            prop_assert!(vs >= lo);
            if va != vb {
                prop_assert_eq!(vs, lo);
            }
        }

        #[test]
        fn normalization(n in -1000i64..1000, d in 1i64..1000, k in -50i64..50) {
            prop_assume!(k != 0);
            prop_assert_eq!(q(n, d), q(n * k, d * k));
            let r = q(n * k, d * k);
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one());
        }
    }
}
