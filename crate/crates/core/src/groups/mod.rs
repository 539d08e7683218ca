//! Finite permutation groups, subgroups up to conjugacy, and characters with
//! exact cyclotomic values.

mod character;
mod cyclotomic;
pub mod fixtures;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ultrametric::Prime;

pub use character::{inner_product, is_irreducible, isotypic_dim, trivial_on, Character, CharacterJson};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};

pub const MAX_DEGREE: usize = 16;
pub const MAX_ORDER: usize = 4096;

/// A permutation of `{0, .., degree-1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u8).collect())
    }

    /// From one-line notation on `{1, .., n}`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::invalid(format!("permutation degree {n} outside 1..={MAX_DEGREE}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::invalid(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Perm(out))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm(out)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &x)| i == x as usize).count()
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_based())
    }
}

/// Wire form: `{"degree": n, "generators": [[2,1,3], ...]}` (one-line, 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

/// A permutation group with its elements enumerated in lexicographic order
/// (so the identity has index 0) and full multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    exponent: u32,
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::invalid(format!("degree {degree} outside 1..={MAX_DEGREE}")));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(format!("generator {g:?} does not have degree {degree}")));
        }
        let id = Perm::identity(degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > MAX_ORDER {
                        return Err(Error::invalid(format!("group order exceeds {MAX_ORDER}")));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        let index: HashMap<&Perm, u16> = elements.iter().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let n = elements.len();
        let mut mul = vec![0u16; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * n + b] = index[&pa.compose(pb)];
            }
        }
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        let mut group = FiniteGroup {
            degree,
            generators,
            elements,
            mul,
            inv,
            class_of: Vec::new(),
            classes: Vec::new(),
            exponent: 1,
        };
        group.compute_classes();
        group.exponent = (0..n).map(|g| group.element_order(g)).fold(1, num_integer::lcm);
        Ok(group)
    }

    pub fn from_json(json: &GroupJson) -> Result<Self> {
        let gens = json.generators.iter().map(|g| Perm::from_one_based(g)).collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_generators(json.degree, gens)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { degree: self.degree, generators: self.generators.iter().map(Perm::to_one_based).collect() }
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        self.class_of = vec![usize::MAX; n];
        for x in 0..n {
            if self.class_of[x] != usize::MAX {
                continue;
            }
            let label = self.classes.len();
            let members: BTreeSet<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            for &y in &members {
                self.class_of[y] = label;
            }
            self.classes.push(members.into_iter().collect());
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, g: usize) -> u32 {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Conjugacy classes, ordered by their smallest element (class 0 is `{e}`).
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn is_central(&self, g: usize) -> bool {
        self.classes[self.class_of[g]].len() == 1
    }

    pub fn full(&self) -> Subgroup {
        Subgroup((0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup(vec![0])
    }

    /// Validate an element-index list as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let n = self.order();
        if let Some(&bad) = elements.iter().find(|&&x| x >= n) {
            return Err(Error::data(format!("element index {bad} out of range for group of order {n}")));
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if !set.contains(&0) {
            return Err(Error::data(format!("{elements:?} does not contain the identity")));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::data(format!("{elements:?} is not closed under inverses")));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::data(format!("{elements:?} is not closed under multiplication")));
                }
            }
        }
        Ok(Subgroup(set.into_iter().collect()))
    }

    /// Closure of a set of element indices.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Result<Subgroup> {
        let n = self.order();
        if let Some(&bad) = gens.iter().find(|&&x| x >= n) {
            return Err(Error::data(format!("element index {bad} out of range for group of order {n}")));
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup((0..n).filter(|&x| seen[x]).collect()))
    }

    /// Subgroup generated by permutations given in 1-based one-line notation.
    pub fn subgroup_from_perms(&self, perms: &[Vec<usize>]) -> Result<Subgroup> {
        let gens = perms
            .iter()
            .map(|p| {
                let perm = Perm::from_one_based(p)?;
                self.index_of(&perm).ok_or_else(|| Error::data(format!("{p:?} is not an element of the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.subgroup_generated(&gens)
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut out: Vec<usize> = h.0.iter().map(|&x| self.conjugate(g, x)).collect();
        out.sort_unstable();
        Subgroup(out)
    }

    /// Is there `g` with `g h g⁻¹ ⊆ k`?
    pub fn conjugate_into(&self, h: &Subgroup, k: &Subgroup) -> bool {
        if !k.order().is_multiple_of(h.order()) {
            return false;
        }
        (0..self.order()).any(|g| h.0.iter().all(|&x| k.contains(self.conjugate(g, x))))
    }

    /// Is there `g` with `g h₁ g⁻¹ = h₂`?
    pub fn are_conjugate(&self, h1: &Subgroup, h2: &Subgroup) -> bool {
        h1.order() == h2.order() && self.conjugate_into(h1, h2)
    }

    /// Is `n` a normal subgroup of `h`?
    pub fn is_normal_in(&self, n: &Subgroup, h: &Subgroup) -> bool {
        n.is_subgroup_of(h) && h.0.iter().all(|&g| n.0.iter().all(|&x| n.contains(self.conjugate(g, x))))
    }

    /// Every subgroup, as sorted element lists, sorted by (order, elements).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let cyclic: BTreeSet<Vec<usize>> =
            (0..self.order()).map(|g| self.subgroup_generated(&[g]).unwrap().0).collect();
        let mut all = cyclic.clone();
        let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| h.binary_search(x).is_ok()) {
                        continue;
                    }
                    let gens: Vec<usize> = h.iter().chain(c.iter()).copied().collect();
                    let joined = self.subgroup_generated(&gens).unwrap().0;
                    if all.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Subgroup> = all.into_iter().map(Subgroup).collect();
        out.sort_by(|a, b| (a.order(), &a.0).cmp(&(b.order(), &b.0)));
        out
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Sorted element indices of a subgroup of some [`FiniteGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// `[other : self]`, assuming `self ≤ other`.
    pub fn index_in(&self, other: &Subgroup) -> usize {
        other.order() / self.order()
    }
}

/// Subgroup input: a list of element indices, or generators in one-line
/// notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupJson {
    Elements(Vec<usize>),
    Generated { generators: Vec<Vec<usize>> },
}

impl SubgroupJson {
    pub fn resolve(&self, group: &FiniteGroup) -> Result<Subgroup> {
        match self {
            SubgroupJson::Elements(e) => group.subgroup(e),
            SubgroupJson::Generated { generators } => group.subgroup_from_perms(generators),
        }
    }
}

impl From<&Subgroup> for SubgroupJson {
    fn from(h: &Subgroup) -> Self {
        SubgroupJson::Elements(h.0.clone())
    }
}

pub fn is_prime_power(n: usize, p: Prime) -> bool {
    let p = p.get() as usize;
    let mut n = n;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `|h|` is a power of `p` (including `p⁰`).
pub fn is_p_group(h: &Subgroup, p: Prime) -> bool {
    is_prime_power(h.order(), p)
}

pub fn subgroup_generated(group: &FiniteGroup, gens: &[usize]) -> Result<Subgroup> {
    group.subgroup_generated(gens)
}

pub fn are_conjugate(group: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> bool {
    group.are_conjugate(h1, h2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_generators(
            3,
            vec![Perm::from_one_based(&[2, 1, 3]).unwrap(), Perm::from_one_based(&[2, 3, 1]).unwrap()],
        )
        .unwrap()
    }

    fn idx(g: &FiniteGroup, p: &[usize]) -> usize {
        g.index_of(&Perm::from_one_based(p).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.element(0), &Perm::identity(3));
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.classes().len(), 3);
        assert_eq!(g.classes()[0], vec![0]);
    }

    #[test]
    fn generated_examples() {
        let g = s3();
        assert_eq!(g.subgroup_generated(&[]).unwrap(), g.trivial());
        let gens: Vec<usize> = g.generators().iter().map(|p| g.index_of(p).unwrap()).collect();
        assert_eq!(g.subgroup_generated(&gens).unwrap(), g.full());
        assert_eq!(g.subgroup_generated(&[idx(&g, &[2, 1, 3])]).unwrap().order(), 2);
        assert!(g.subgroup_generated(&[17]).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        let g = s3();
        let t12 = g.subgroup_generated(&[idx(&g, &[2, 1, 3])]).unwrap();
        let t13 = g.subgroup_generated(&[idx(&g, &[3, 2, 1])]).unwrap();
        let c3 = g.subgroup_generated(&[idx(&g, &[2, 3, 1])]).unwrap();
        assert!(are_conjugate(&g, &t12, &t12));
        assert!(are_conjugate(&g, &t12, &t13));
        assert!(!are_conjugate(&g, &t12, &c3));
        assert!(g.conjugate_into(&g.trivial(), &c3));
        assert!(!g.conjugate_into(&t12, &c3));
        assert!(g.is_normal_in(&c3, &g.full()));
        assert!(!g.is_normal_in(&t12, &g.full()));
    }

    #[test]
    fn p_group_examples() {
        let g = s3();
        let two = Prime::new(2).unwrap();
        let three = Prime::new(3).unwrap();
        assert!(is_p_group(&g.trivial(), three));
        assert!(!is_p_group(&g.full(), three));
        let z4 = FiniteGroup::from_generators(4, vec![Perm::from_one_based(&[2, 3, 4, 1]).unwrap()]).unwrap();
        assert!(is_p_group(&z4.full(), two));
    }

    #[test]
    fn subgroup_validation() {
        let g = s3();
        assert!(matches!(g.subgroup(&[1]), Err(Error::Data(_))));
        assert!(matches!(g.subgroup(&[0, 9]), Err(Error::Data(_))));
        let c3 = g.subgroup_generated(&[idx(&g, &[2, 3, 1])]).unwrap();
        assert_eq!(g.subgroup(c3.elements()).unwrap(), c3);
        let not_closed = vec![0, idx(&g, &[2, 1, 3]), idx(&g, &[3, 2, 1])];
        assert!(g.subgroup(&not_closed).is_err());
    }

    #[test]
    fn s3_has_six_subgroups() {
        let g = s3();
        let subs = g.all_subgroups();
        assert_eq!(subs.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn caps_are_enforced() {
        assert!(FiniteGroup::from_generators(17, vec![]).is_err());
        assert!(Perm::from_one_based(&[1, 1]).is_err());
        // S_8 has order 40320
        let big = FiniteGroup::from_generators(
            8,
            vec![
                Perm::from_one_based(&[2, 1, 3, 4, 5, 6, 7, 8]).unwrap(),
                Perm::from_one_based(&[2, 3, 4, 5, 6, 7, 8, 1]).unwrap(),
            ],
        );
        assert!(big.is_err());
    }
}
