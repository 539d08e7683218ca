use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Cyclotomic, FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::ultrametric::Rational;

/// Wire form: `{"m": m, "classes": [rep index, ..], "values": [[coeffs], ..]}`
/// with `values[i]` the value on the class of `classes[i]`, written in the
/// powers of `ζ_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub m: u32,
    pub classes: Vec<usize>,
    pub values: Vec<Vec<Rational>>,
}

/// A class function with values in `ℚ(ζ_m)`, one value per conjugacy class
/// in the group's class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    m: u32,
    values: Vec<Cyclotomic>,
}

impl Character {
    fn checked(group: &FiniteGroup, m: u32, values: Vec<Cyclotomic>) -> Result<Self> {
        debug_assert_eq!(values.len(), group.classes().len());
        let deg = values[0].to_rational();
        match deg {
            Some(d) if d.is_integer() && !d.is_negative() => {}
            _ => {
                return Err(Error::data(format!(
                    "value at the identity must be a nonnegative integer, got {:?}",
                    values[0]
                )))
            }
        }
        Ok(Character { m, values })
    }

    /// Evaluate `f` on one representative per class.
    pub fn from_class_fn(group: &FiniteGroup, m: u32, f: impl Fn(usize) -> Cyclotomic) -> Result<Self> {
        let values = group.classes().iter().map(|c| f(c[0]).lift(m)).collect::<Result<Vec<_>>>()?;
        Character::checked(group, m, values)
    }

    /// The linear character sending generator `i` to `ζ_m^{exponents[i]}`.
    pub fn linear(group: &FiniteGroup, m: u32, exponents: &[u32]) -> Result<Self> {
        let gens: Vec<usize> =
            group.generators().iter().map(|p| group.index_of(p).expect("generators are elements")).collect();
        if gens.len() != exponents.len() {
            return Err(Error::invalid(format!("{} exponents for {} generators", exponents.len(), gens.len())));
        }
        let mut exp = vec![None; group.order()];
        exp[0] = Some(0u32);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let ex = exp[x].unwrap();
            for (&g, &k) in gens.iter().zip(exponents) {
                let y = group.mul(g, x);
                let ey = (ex + k) % m;
                match exp[y] {
                    None => {
                        exp[y] = Some(ey);
                        queue.push_back(y);
                    }
                    Some(e) if e != ey => {
                        return Err(Error::invalid(format!(
                            "generator images {exponents:?} do not define a homomorphism"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Character::from_class_fn(group, m, |g| Cyclotomic::zeta_pow(m, exp[g].unwrap()))
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Character::from_class_fn(group, 1, |_| Cyclotomic::one(1)).unwrap()
    }

    pub fn zero(group: &FiniteGroup) -> Self {
        Character::from_class_fn(group, 1, |_| Cyclotomic::zero(1)).unwrap()
    }

    /// Character of the regular representation.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order() as i64;
        Character::from_class_fn(group, 1, |g| Cyclotomic::from_int(1, if g == 0 { n } else { 0 })).unwrap()
    }

    /// Fixed-point count of the defining permutation action.
    pub fn permutation(group: &FiniteGroup) -> Self {
        Character::from_class_fn(group, 1, |g| Cyclotomic::from_int(1, group.element(g).fixed_points() as i64)).unwrap()
    }

    pub fn from_json(group: &FiniteGroup, json: &CharacterJson) -> Result<Self> {
        let k = group.classes().len();
        if json.classes.len() != json.values.len() {
            return Err(Error::data(format!(
                "{} class representatives but {} values",
                json.classes.len(),
                json.values.len()
            )));
        }
        let mut values: Vec<Option<Cyclotomic>> = vec![None; k];
        for (&rep, coeffs) in json.classes.iter().zip(&json.values) {
            if rep >= group.order() {
                return Err(Error::data(format!("class representative {rep} out of range")));
            }
            let c = group.class_of(rep);
            if values[c].is_some() {
                return Err(Error::data(format!("conjugacy class of element {rep} listed twice")));
            }
            values[c] = Some(Cyclotomic::new(json.m, coeffs.clone())?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                v.ok_or_else(|| Error::data(format!("no value for the class of element {}", group.classes()[c][0])))
            })
            .collect::<Result<Vec<_>>>()?;
        Character::checked(group, json.m, values)
    }

    pub fn to_json(&self, group: &FiniteGroup, id: Option<String>) -> CharacterJson {
        CharacterJson {
            id,
            m: self.m,
            classes: group.classes().iter().map(|c| c[0]).collect(),
            values: self.values.iter().map(|v| v.coeffs().to_vec()).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn class_values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, group: &FiniteGroup, g: usize) -> &Cyclotomic {
        &self.values[group.class_of(g)]
    }

    /// `χ(1)`.
    pub fn degree(&self) -> Rational {
        self.values[0].to_rational().expect("validated on construction")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_zero)
    }

    pub fn add(&self, other: &Character) -> Character {
        let values: Vec<Cyclotomic> = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Character { m: values[0].order(), values }
    }

    pub fn sub(&self, other: &Character) -> Character {
        let values: Vec<Cyclotomic> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Character { m: values[0].order(), values }
    }

    pub fn scale(&self, k: i64) -> Character {
        Character { m: self.m, values: self.values.iter().map(|v| v.scale(&Rational::from(k))).collect() }
    }
}

/// `(1/|G|) Σ_g χ(g) ψ(g⁻¹)`, which must come out rational.
pub fn inner_product(group: &FiniteGroup, chi: &Character, psi: &Character) -> Result<Rational> {
    let k = group.classes().len();
    if chi.values.len() != k || psi.values.len() != k {
        return Err(Error::data("character does not belong to this group"));
    }
    let mut sum = Cyclotomic::zero(num_integer::lcm(chi.m, psi.m));
    for (c, members) in group.classes().iter().enumerate() {
        let inv_class = group.class_of(group.inv(members[0]));
        let term = &chi.values[c] * &psi.values[inv_class];
        sum = &sum + &term.scale(&Rational::from(members.len() as i64));
    }
    let total = sum
        .to_rational()
        .ok_or_else(|| Error::data("input is not a virtual character pair: inner product is irrational"))?;
    Ok(total / Rational::from(group.order() as i64))
}

pub fn is_irreducible(group: &FiniteGroup, chi: &Character) -> Result<bool> {
    Ok(inner_product(group, chi, chi)? == Rational::one())
}

/// `χ(h) = χ(1)` for every `h ∈ H`.
pub fn trivial_on(group: &FiniteGroup, chi: &Character, h: &Subgroup) -> bool {
    let deg = &chi.values[0];
    h.elements().iter().all(|&x| chi.value(group, x) == deg)
}

/// Multiplicity of the irreducible `tau` in `v`.
pub fn isotypic_dim(group: &FiniteGroup, tau: &Character, v: &Character) -> Result<u64> {
    if !is_irreducible(group, tau)? {
        return Err(Error::precondition("isotypic dimension needs an irreducible character"));
    }
    let ip = inner_product(group, tau, v)?;
    match ip.to_i64() {
        Some(n) if n >= 0 => Ok(n as u64),
        _ => Err(Error::data(format!("multiplicity {ip} is not a nonnegative integer"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::fixtures;

    #[test]
    fn z2_products() {
        let f = fixtures::cyclic(2);
        let g = &f.group;
        let triv = f.character("triv");
        let sign = f.character("sign");
        let reg = Character::regular(g);
        assert_eq!(inner_product(g, triv, triv).unwrap(), Rational::one());
        assert_eq!(inner_product(g, &reg, sign).unwrap(), Rational::one());
        assert_eq!(inner_product(g, sign, triv).unwrap(), Rational::zero());
    }

    #[test]
    fn irreducibility() {
        let z2 = fixtures::cyclic(2);
        assert!(is_irreducible(&z2.group, z2.character("triv")).unwrap());
        assert!(!is_irreducible(&z2.group, &Character::regular(&z2.group)).unwrap());
        let s3 = fixtures::s3();
        assert!(is_irreducible(&s3.group, s3.character("std")).unwrap());
    }

    #[test]
    fn triviality_on_subgroups() {
        let z2 = fixtures::cyclic(2);
        let g = &z2.group;
        assert!(trivial_on(g, z2.character("sign"), &g.trivial()));
        assert!(!trivial_on(g, z2.character("sign"), &g.full()));
        assert!(trivial_on(g, z2.character("triv"), &g.full()));
    }

    #[test]
    fn isotypic_examples() {
        let z2 = fixtures::cyclic(2);
        let g = &z2.group;
        assert_eq!(isotypic_dim(g, z2.character("triv"), &Character::regular(g)).unwrap(), 1);
        let two_sign = z2.character("sign").scale(2);
        assert_eq!(isotypic_dim(g, z2.character("sign"), &two_sign).unwrap(), 2);
        let s3 = fixtures::s3();
        assert_eq!(isotypic_dim(&s3.group, s3.character("std"), &Character::regular(&s3.group)).unwrap(), 2);
        assert!(isotypic_dim(g, &Character::regular(g), &two_sign).is_err());
    }

    #[test]
    fn irrational_pairing_is_a_data_error() {
        let z4 = fixtures::cyclic(4);
        let g = &z4.group;
        // ζ4 at the identity is refused
        let bad = CharacterJson {
            id: None,
            m: 4,
            classes: vec![0, 1, 2, 3],
            values: vec![vec![Rational::zero(), Rational::one()]; 4],
        };
        assert!(Character::from_json(g, &bad).is_err());
        // a class function whose pairing with the trivial character is irrational
        let half = Character::from_class_fn(g, 4, |x| {
            if x == 0 {
                Cyclotomic::from_int(4, 1)
            } else {
                Cyclotomic::zeta_pow(4, 1)
            }
        })
        .unwrap();
        assert!(matches!(inner_product(g, &half, z4.character("triv")), Err(Error::Data(_))));
    }

    #[test]
    fn json_round_trip() {
        let s3 = fixtures::s3();
        let chi = s3.character("std");
        let json = chi.to_json(&s3.group, Some("std".into()));
        assert_eq!(&Character::from_json(&s3.group, &json).unwrap(), chi);
        let mut missing = json.clone();
        missing.classes.pop();
        missing.values.pop();
        assert!(Character::from_json(&s3.group, &missing).is_err());
        let mut twice = json;
        twice.classes[2] = twice.classes[1];
        assert!(Character::from_json(&s3.group, &twice).is_err());
    }
}
