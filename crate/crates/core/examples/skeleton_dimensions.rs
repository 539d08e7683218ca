// Cohomology dimensions of open curves read off their skeletons.

use nacurve::skeleton::Skeleton;

fn report(name: &str, s: &Skeleton) -> nacurve::Result<()> {
    println!(
        "{name:<28} h1c={} h1={} csp={} B={} h1_proper={} tree_like={}",
        s.dim_h1c()?,
        s.dim_h1()?,
        s.dim_h1_csp()?,
        s.dim_boundary_module()?,
        s.dim_h1_proper(),
        s.is_tree_like()
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // genus 2 with three ends
    let g2 = Skeleton::from_parts(&[2], &[], &[0, 0, 0])?;
    report("genus 2, three ends", &g2)?;
    assert_eq!((g2.dim_h1c()?, g2.dim_h1()?, g2.dim_h1_csp()?, g2.dim_boundary_module()?), (6, 6, 4, 2));

    // a cycle of rational curves: genus from the loop, not tree-like
    let cycle = Skeleton::from_parts(&[0, 0, 0], &[(0, 1), (1, 2), (2, 0)], &[0])?;
    report("triangle of P1s, one end", &cycle)?;
    assert_eq!(cycle.total_genus(), 1);

    // two components, each with its own ends
    let split = Skeleton::from_parts(&[1, 0], &[], &[0, 1, 1])?;
    report("elliptic + annulus", &split)?;
    assert_eq!(split.dim_boundary_module()?, 1);

    let no_ends = Skeleton::from_parts(&[1], &[], &[])?;
    match no_ends.dim_h1c() {
        Err(e) => println!("{:<28} {e}", "proper curve"),
        Ok(_) => unreachable!(),
    }
    println!("{}", cycle.to_dot());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
