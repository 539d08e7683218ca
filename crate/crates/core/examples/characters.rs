// Character tables with exact cyclotomic values.

use nacurve::groups::{fixtures, inner_product, is_irreducible, isotypic_dim, Character};
use nacurve::ultrametric::Rational;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for f in fixtures::all() {
        let g = &f.group;
        print!("{:<6} order {:>2}, {} classes:", f.name, g.order(), g.classes().len());
        for (id, chi) in &f.characters {
            assert!(is_irreducible(g, chi)?);
            print!(" {id}({})", chi.degree());
        }
        println!();
        // row orthogonality
        for (a, chi) in &f.characters {
            for (b, psi) in &f.characters {
                let expected = if a == b { Rational::one() } else { Rational::zero() };
                assert_eq!(inner_product(g, chi, psi)?, expected);
            }
        }
        // each irreducible occurs in the regular character as often as its degree
        let reg = Character::regular(g);
        for (_, chi) in &f.characters {
            assert_eq!(Rational::from(isotypic_dim(g, chi, &reg)? as i64), chi.degree());
        }
    }

    // ℤ/4 needs genuine fourth roots of unity
    let z4 = fixtures::cyclic(4);
    let chi1 = z4.character("chi1");
    for x in 0..4 {
        println!("chi1(g^{x}) = {:?}", chi1.value(&z4.group, x));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
