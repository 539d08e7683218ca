// Blowing down unstable rational components.

use nacurve::skeleton::{stabilize, Skeleton, Stabilized};
use nacurve::ultrametric::Rational;

fn show(name: &str, s: &Skeleton) -> nacurve::Result<Vec<Stabilized>> {
    let out = stabilize(s)?;
    for c in &out {
        match c {
            Stabilized::Stable(k) => {
                println!("{name}: stable, genera {:?}, {} edges, {} legs", k.genera(), k.edges().len(), k.legs().len())
            }
            other => println!("{name}: {}", other.kind()),
        }
    }
    Ok(out)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // rational tail ending in a leg: the whole thing is a disk
    let tail = Skeleton::from_parts(&[0, 0, 0], &[(0, 1), (1, 2)], &[2])?;
    assert_eq!(show("leg-terminated chain", &tail)?, vec![Stabilized::Disk]);

    // a chain with a leg at each end is an annulus, thickness adds up
    let chain = Skeleton::new(
        vec![0, 0, 0],
        vec![(0, 1), (1, 2)],
        vec![0, 2],
        Some(vec![Rational::from(1), Rational::new(1, 2)?]),
    )?;
    assert_eq!(show("two-leg chain", &chain)?, vec![Stabilized::Annulus]);

    // an elliptic curve with a rational bridge to its end
    let bridged = Skeleton::from_parts(&[1, 0, 0], &[(0, 1), (1, 2)], &[2])?;
    let out = show("elliptic with a bridge", &bridged)?;
    assert_eq!(out[0].as_skeleton(), Skeleton::from_parts(&[1], &[], &[0])?);

    // stabilizing twice changes nothing
    let again = stabilize(&out[0].as_skeleton())?;
    assert_eq!(again, out);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
