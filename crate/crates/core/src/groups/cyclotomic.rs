use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ultrametric::Rational;

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count() as u32
}

/// Coefficients of `Φ_m`, lowest degree first: `x^m - 1` divided by `Φ_d`
/// for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "Φ_0 is undefined");
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        poly = divide_exact(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

/// Exact quotient of integer polynomials, divisor monic.
fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An element of `ℚ(ζ_m)` in the power basis `1, ζ, .., ζ^{φ(m)-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    m: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// `Σ coeffs[i] ζ_m^i` for any number of coefficients.
    pub fn new(m: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("cyclotomic order must be positive"));
        }
        let mut folded = vec![Rational::zero(); m as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            folded[i % m as usize] = &folded[i % m as usize] + &c;
        }
        Ok(Cyclotomic { m, coeffs: reduce(m, folded) })
    }

    pub fn zero(m: u32) -> Self {
        Cyclotomic::from_rational(m, Rational::zero())
    }

    pub fn one(m: u32) -> Self {
        Cyclotomic::from_rational(m, Rational::one())
    }

    pub fn from_rational(m: u32, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); euler_phi(m) as usize];
        coeffs[0] = q;
        Cyclotomic { m, coeffs }
    }

    pub fn from_int(m: u32, n: i64) -> Self {
        Cyclotomic::from_rational(m, Rational::from(n))
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(m: u32, k: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); m as usize];
        coeffs[(k % m) as usize] = Rational::one();
        Cyclotomic { m, coeffs: reduce(m, coeffs) }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The same number written in `ℚ(ζ_l)`, `m | l`, via `ζ_m = ζ_l^{l/m}`.
    pub fn lift(&self, l: u32) -> Result<Self> {
        if !l.is_multiple_of(self.m) {
            return Err(Error::invalid(format!("cannot lift from order {} to {l}", self.m)));
        }
        let step = (l / self.m) as usize;
        let mut coeffs = vec![Rational::zero(); l as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i * step) % l as usize] = c.clone();
        }
        Ok(Cyclotomic { m: l, coeffs: reduce(l, coeffs) })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Cyclotomic::one(self.m), |acc, _| &acc * self)
    }

    /// Evaluate an integer polynomial (lowest degree first) at `self`.
    pub fn eval_poly(&self, poly: &[BigInt]) -> Self {
        poly.iter().rev().fold(Cyclotomic::zero(self.m), |acc, c| {
            &(&acc * self) + &Cyclotomic::from_rational(self.m, Rational::from(c.clone()))
        })
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let l = num_integer::lcm(self.m, other.m);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }
}

fn reduce(m: u32, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    while coeffs.len() > deg {
        let top = coeffs.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = coeffs.len() - deg;
        for (j, pj) in phi.iter().take(deg).enumerate() {
            coeffs[shift + j] = &coeffs[shift + j] - &(&top * &Rational::from(pj.clone()));
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        Cyclotomic { m: a.m, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(&Rational::from(-1))
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let mut prod = vec![Rational::zero(); (a.coeffs.len() + b.coeffs.len()).max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] = &prod[i + j] + &(x * y);
            }
        }
        Cyclotomic { m: a.m, coeffs: reduce(a.m, prod) }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                _ => format!("{c}·ζ{}^{i}", self.m),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        for m in 1..=30 {
            assert_eq!(cyclotomic_polynomial(m).len() as u32 - 1, euler_phi(m));
        }
    }

    #[test]
    fn fourth_roots() {
        let i = Cyclotomic::zeta_pow(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(4, -1));
        assert_eq!(Cyclotomic::zeta_pow(4, 2), Cyclotomic::from_int(4, -1));
        assert_eq!((&i + &Cyclotomic::zeta_pow(4, 3)).to_rational(), Some(Rational::zero()));
        assert_eq!(i.to_rational(), None);
    }

    #[test]
    fn lifting_is_consistent() {
        let w = Cyclotomic::zeta_pow(3, 1);
        let lifted = w.lift(6).unwrap();
        assert_eq!(lifted, Cyclotomic::zeta_pow(6, 2));
        let minus_one = Cyclotomic::from_int(2, -1);
        assert_eq!(&minus_one * &Cyclotomic::zeta_pow(4, 1), Cyclotomic::zeta_pow(4, 3));
        assert!(w.lift(4).is_err());
        assert!(Cyclotomic::new(0, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn roots_of_unity(m in 1u32..=24, k in 0u32..48) {
            let z = Cyclotomic::zeta_pow(m, 1);
            prop_assert_eq!(z.pow(m), Cyclotomic::one(m));
            prop_assert!(z.eval_poly(&cyclotomic_polynomial(m)).is_zero());
            prop_assert_eq!(z.pow(k), Cyclotomic::zeta_pow(m, k));
        }

        #[test]
        fn reduction_is_idempotent(m in 1u32..=24, raw in prop::collection::vec(-5i64..5, 0..40)) {
            let x = Cyclotomic::new(m, raw.iter().map(|&c| Rational::from(c)).collect()).unwrap();
            let again = Cyclotomic::new(m, x.coeffs().to_vec()).unwrap();
            prop_assert_eq!(&again, &x);
            prop_assert_eq!(x.coeffs().len() as u32, euler_phi(m));
            // evaluating the raw polynomial at ζ agrees with the reduced form
            let z = Cyclotomic::zeta_pow(m, 1);
            prop_assert_eq!(z.eval_poly(&raw.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()), x);
        }

        #[test]
        fn ring_laws(m in 1u32..=12, a in prop::collection::vec(-4i64..4, 0..12), b in prop::collection::vec(-4i64..4, 0..12)) {
            let a = Cyclotomic::new(m, a.into_iter().map(Rational::from).collect()).unwrap();
            let b = Cyclotomic::new(m, b.into_iter().map(Rational::from).collect()).unwrap();
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }
    }
}
