//! Small groups with their full character tables, used by tests, examples
//! and the shipped cover fixtures.

use super::{Character, Cyclotomic, FiniteGroup, Perm};

pub struct FixtureGroup {
    pub name: String,
    pub group: FiniteGroup,
    /// Irreducible characters, with ids.
    pub characters: Vec<(String, Character)>,
}

impl FixtureGroup {
    pub fn character(&self, id: &str) -> &Character {
        &self
            .characters
            .iter()
            .find(|(name, _)| name == id)
            .unwrap_or_else(|| panic!("{} has no character {id:?}", self.name))
            .1
    }
}

fn perm(images: &[usize]) -> Perm {
    Perm::from_one_based(images).expect("fixture permutation")
}

fn group(degree: usize, gens: &[&[usize]]) -> FiniteGroup {
    FiniteGroup::from_generators(degree, gens.iter().map(|g| perm(g)).collect()).expect("fixture group")
}

fn cycle(n: usize) -> Vec<usize> {
    (2..=n).chain([1]).collect()
}

/// `ℤ/n` acting on `n` points; characters `chi{k}: g ↦ ζ_n^k`, with the
/// aliases `triv` (and `sign` for `n = 2`).
pub fn cyclic(n: usize) -> FixtureGroup {
    let group = group(n, &[&cycle(n)]);
    let characters = (0..n as u32)
        .map(|k| {
            let name = match (k, n) {
                (0, _) => "triv".to_string(),
                (1, 2) => "sign".to_string(),
                _ => format!("chi{k}"),
            };
            (name, Character::linear(&group, n as u32, &[k]).unwrap())
        })
        .collect();
    FixtureGroup { name: format!("Z{n}"), group, characters }
}

/// `ℤ/2 × ℤ/2` generated by `(12)(34)` and `(13)(24)`.
pub fn klein() -> FixtureGroup {
    let group = group(4, &[&[2, 1, 4, 3], &[3, 4, 1, 2]]);
    let characters = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(a, b)| {
            let name = if (a, b) == (0, 0) { "triv".to_string() } else { format!("chi{a}{b}") };
            (name, Character::linear(&group, 2, &[a, b]).unwrap())
        })
        .collect();
    FixtureGroup { name: "Z2xZ2".into(), group, characters }
}

/// `S₃` on three points: trivial, sign and the 2-dimensional standard
/// character (permutation character minus trivial).
pub fn s3() -> FixtureGroup {
    let group = group(3, &[&[2, 1, 3], &[2, 3, 1]]);
    let triv = Character::trivial(&group);
    let sign = Character::linear(&group, 2, &[1, 0]).unwrap();
    let std = Character::permutation(&group).sub(&triv);
    FixtureGroup {
        name: "S3".into(),
        group,
        characters: vec![("triv".into(), triv), ("sign".into(), sign), ("std".into(), std)],
    }
}

/// The 2-dimensional irreducible of `D₄` and `Q₈`: 2 at the identity, -2 at
/// the central involution, 0 elsewhere.
fn two_dim(group: &FiniteGroup) -> Character {
    Character::from_class_fn(group, 1, |g| {
        let v = if g == 0 {
            2
        } else if group.is_central(g) {
            -2
        } else {
            0
        };
        Cyclotomic::from_int(1, v)
    })
    .unwrap()
}

/// Linear characters of a 2-generated group of exponent 4 with both
/// generators sent to ±1.
fn sign_characters(group: &FiniteGroup) -> Vec<(String, Character)> {
    [(0, 0), (2, 0), (0, 2), (2, 2)]
        .iter()
        .map(|&(a, b)| {
            let name = if (a, b) == (0, 0) { "triv".to_string() } else { format!("eps{}{}", a / 2, b / 2) };
            (name, Character::linear(group, 4, &[a, b]).unwrap())
        })
        .collect()
}

/// Dihedral group of order 8 on the vertices of a square, generated by the
/// rotation `(1234)` and the reflection `(24)`.
pub fn d4() -> FixtureGroup {
    let group = group(4, &[&[2, 3, 4, 1], &[1, 4, 3, 2]]);
    let mut characters = sign_characters(&group);
    characters.push(("rho".into(), two_dim(&group)));
    FixtureGroup { name: "D4".into(), group, characters }
}

/// Quaternion group in its regular representation on
/// `1, -1, i, -i, j, -j, k, -k` (points 1..8), generated by left
/// multiplication by `i` and `j`.
pub fn q8() -> FixtureGroup {
    // unit products: index 0=1, 1=i, 2=j, 3=k; (sign, unit)
    const TABLE: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let point = |neg: bool, unit: usize| 2 * unit + neg as usize;
    let left = |unit: usize| -> Vec<usize> {
        (0..8)
            .map(|x| {
                let (neg, u) = (x % 2 == 1, x / 2);
                let (s, w) = TABLE[unit][u];
                point(neg ^ s, w) + 1
            })
            .collect()
    };
    let group = group(8, &[&left(1), &left(2)]);
    let mut characters = sign_characters(&group);
    characters.push(("rho".into(), two_dim(&group)));
    FixtureGroup { name: "Q8".into(), group, characters }
}

/// The six groups whose character tables ship with the crate.
pub fn all() -> Vec<FixtureGroup> {
    vec![cyclic(2), cyclic(4), klein(), s3(), d4(), q8()]
}

/// `ℤ/a × ℤ/b` on `a + b` points.
pub fn cyclic_product(a: usize, b: usize) -> FiniteGroup {
    let first: Vec<usize> = cycle(a).into_iter().chain(a + 1..=a + b).collect();
    let second: Vec<usize> = (1..=a).chain(cycle(b).into_iter().map(|x| x + a)).collect();
    group(a + b, &[&first, &second])
}

/// p-groups of order at most 64, with their prime.
pub fn p_groups() -> Vec<(String, u64, FiniteGroup)> {
    vec![
        ("Z2".into(), 2, cyclic(2).group),
        ("Z4".into(), 2, cyclic(4).group),
        ("Z2xZ2".into(), 2, klein().group),
        ("D4".into(), 2, d4().group),
        ("Q8".into(), 2, q8().group),
        ("Z16".into(), 2, cyclic(16).group),
        ("D8".into(), 2, group(8, &[&cycle(8), &[1, 8, 7, 6, 5, 4, 3, 2]])),
        ("Z4xZ4".into(), 2, cyclic_product(4, 4)),
        ("Z8xZ8".into(), 2, cyclic_product(8, 8)),
        ("Z3".into(), 3, cyclic(3).group),
        ("Z3xZ3".into(), 3, cyclic_product(3, 3)),
        ("Z3xZ9".into(), 3, cyclic_product(3, 9)),
        ("Z5".into(), 5, cyclic(5).group),
    ]
}
