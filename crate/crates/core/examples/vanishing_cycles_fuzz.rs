// Blow-downs with connected fibers, and the seeded check that the
// cohomological test agrees with "almost semistable and tree-like".

use nacurve::fuzz::run_fuzz;
use nacurve::skeleton::{contract, Skeleton};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // P1 - P1 - E with one end on the first P1
    let fine = Skeleton::from_parts(&[0, 0, 1], &[(0, 1), (1, 2)], &[0])?;

    // collapsing the rational middle curve loses nothing
    let c = contract(&fine, &[vec![1]])?;
    println!("collapse P1: almost semistable {}, test {}", c.is_almost_semistable(), c.cohomological_test()?);
    assert!(c.cohomological_test()?);

    // collapsing the elliptic curve kills its H1
    let c = contract(&fine, &[vec![2]])?;
    println!("collapse E:  almost semistable {}, test {}", c.is_almost_semistable(), c.cohomological_test()?);
    assert!(!c.cohomological_test()?);

    let summary = run_fuzz(2024, 2_000, 4)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    assert_eq!(summary.discrepancies, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
