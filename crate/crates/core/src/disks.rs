//! Closed disks `{x : v_p(x - c) >= r}` with rational center and rational
//! radius-valuation `r > 0`.
//!
//! Distinct `(center, r)` pairs may describe the same disk. Every disk
//! carries its canonical residue (the least nonnegative integer congruent to
//! the center modulo `p^⌈r⌉`), and equality, ordering and hashing go through
//! it.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ultrametric::{Prime, Rational, Valuation};

#[derive(Clone)]
pub struct ClosedDisk {
    center: Rational,
    radius_val: Rational,
    prime: Prime,
    residue: BigInt,
}

/// Wire form of a disk; the prime lives at the top of the enclosing document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskJson {
    pub center: Rational,
    pub v: Rational,
}

impl ClosedDisk {
    pub fn new(center: Rational, radius_val: Rational, prime: Prime) -> Result<Self> {
        if !radius_val.is_positive() {
            return Err(Error::invalid(format!(
                "radius valuation {radius_val} must be positive (disk inside the open unit disk)"
            )));
        }
        if prime.int_valuation(center.denom()).unwrap_or(0) > 0 {
            return Err(Error::invalid(format!("center {center} is not {prime}-integral")));
        }
        let residue = residue(&center, &radius_val, prime);
        Ok(ClosedDisk { center, radius_val, prime, residue })
    }

    /// Shorthand for tests and examples: integer center, `num/den` radius.
    pub fn from_ints(center: i64, v_num: i64, v_den: i64, prime: u64) -> Result<Self> {
        ClosedDisk::new(Rational::from(center), Rational::new(v_num, v_den)?, Prime::new(prime)?)
    }

    pub fn from_json(json: &DiskJson, prime: Prime) -> Result<Self> {
        ClosedDisk::new(json.center.clone(), json.v.clone(), prime)
    }

    pub fn to_json(&self) -> DiskJson {
        DiskJson { center: self.center.clone(), v: self.radius_val.clone() }
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius_val(&self) -> &Rational {
        &self.radius_val
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// The canonical center as an integer in `[0, p^⌈r⌉)`.
    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn canonicalize(&self) -> ClosedDisk {
        ClosedDisk {
            center: Rational::from_integer(self.residue.clone()),
            radius_val: self.radius_val.clone(),
            prime: self.prime,
            residue: self.residue.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.center.is_integer() && self.center.numer() == &self.residue
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.prime.valuation(&(x - &self.center)).at_least(&self.radius_val)
    }

    fn same_prime(&self, other: &ClosedDisk) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::invalid(format!("disks over different primes ({} and {})", self.prime, other.prime)));
        }
        Ok(())
    }

    fn center_distance(&self, other: &ClosedDisk) -> Valuation {
        self.prime.valuation(&(&self.center - &other.center))
    }

    /// Ultrametric containment `inner ⊆ self`.
    pub fn contains(&self, inner: &ClosedDisk) -> Result<bool> {
        self.same_prime(inner)?;
        Ok(inner.radius_val >= self.radius_val && self.center_distance(inner).at_least(&self.radius_val))
    }

    pub fn strictly_contains(&self, inner: &ClosedDisk) -> Result<bool> {
        Ok(self.contains(inner)? && self != inner)
    }

    /// The smallest closed disk containing both `self` and `other`.
    pub fn join(&self, other: &ClosedDisk) -> Result<ClosedDisk> {
        self.same_prime(other)?;
        let mut r = self.radius_val.clone().min(other.radius_val.clone());
        if let Valuation::Finite(d) = self.center_distance(other) {
            r = r.min(d);
        }
        if !r.is_positive() {
            return Err(Error::domain(format!(
                "disks have no common model inside the open unit disk: {self} and {other} \
                 only fit in a disk of radius valuation {r}"
            )));
        }
        Ok(ClosedDisk::new(self.center.clone(), r, self.prime)?.canonicalize())
    }
}

fn residue(center: &Rational, radius_val: &Rational, prime: Prime) -> BigInt {
    let k = radius_val.ceil().to_u64().expect("radius valuation too large");
    let modulus = prime.pow(k);
    let inv = center.denom().extended_gcd(&modulus).x;
    debug_assert!(center.denom().gcd(&modulus).is_one());
    (center.numer() * inv).mod_floor(&modulus)
}

/// Minimal disk containing every member of `disks`.
pub fn enclosing(disks: &[ClosedDisk]) -> Result<ClosedDisk> {
    let (first, rest) = disks.split_first().ok_or_else(|| Error::invalid("enclosing disk of an empty collection"))?;
    rest.iter().try_fold(first.canonicalize(), |acc, d| acc.join(d))
}

/// Smallest collection containing `disks` that is closed under enclosing
/// disks of subsets, sorted by `(radius_val, residue)`.
///
/// Saturating under pairwise joins suffices: by the ultrametric property the
/// enclosing disk of any subset is the join of some pair in it.
pub fn closure(disks: &[ClosedDisk]) -> Result<Vec<ClosedDisk>> {
    if disks.is_empty() {
        return Err(Error::invalid("closure of an empty collection"));
    }
    check_uniform_prime(disks)?;
    let mut set: BTreeSet<ClosedDisk> = disks.iter().map(ClosedDisk::canonicalize).collect();
    loop {
        let members: Vec<ClosedDisk> = set.iter().cloned().collect();
        let mut added = false;
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let j = a.join(b)?;
                added |= set.insert(j);
            }
        }
        if !added {
            return Ok(set.into_iter().collect());
        }
    }
}

/// Sorted, deduplicated canonical forms.
pub fn canonical_set(disks: &[ClosedDisk]) -> Vec<ClosedDisk> {
    let set: BTreeSet<ClosedDisk> = disks.iter().map(ClosedDisk::canonicalize).collect();
    set.into_iter().collect()
}

pub(crate) fn check_uniform_prime(disks: &[ClosedDisk]) -> Result<()> {
    if let Some(first) = disks.first() {
        for d in disks {
            first.same_prime(d)?;
        }
    }
    Ok(())
}

impl PartialEq for ClosedDisk {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.radius_val == other.radius_val && self.residue == other.residue
    }
}

impl Eq for ClosedDisk {}

impl Hash for ClosedDisk {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.prime.hash(state);
        self.radius_val.hash(state);
        self.residue.hash(state);
    }
}

impl Ord for ClosedDisk {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.prime, &self.radius_val, &self.residue).cmp(&(&other.prime, &other.radius_val, &other.residue))
    }
}

impl PartialOrd for ClosedDisk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClosedDisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {})", self.center, self.radius_val)
    }
}

impl fmt::Debug for ClosedDisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {}; p={})", self.center, self.radius_val, self.prime)
    }
}

impl Serialize for ClosedDisk {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
