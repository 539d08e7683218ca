// Semistability verdicts for a ℤ/4-cover of the 2-adic disk.

use nacurve::cover::{
    almost_semistable_verdict, check_semistable, edge_is_annulus, fiber_counts, pgroup_corollary_check, validate_cover,
    CoverJson, CoverSpec, SearchBounds,
};

const FIXTURE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/covers/z4_one_failing_edge.json"));

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let json: CoverJson = serde_json::from_str(FIXTURE)?;
    let cover = CoverSpec::from_json(&json)?;
    assert!(validate_cover(&cover).is_empty());

    for k in fiber_counts(&cover)? {
        println!("{}: {} components, {} ends below", k.disk, k.components, k.ends_xi2);
    }
    for v in 0..cover.base().len() {
        println!("edge into {}: annulus {}", cover.base().vertices()[v], edge_is_annulus(&cover, v)?);
    }

    let standing = almost_semistable_verdict(&cover, SearchBounds::default())?;
    println!("almost semistable and tree-like: {}", standing.almost_semistable_and_tree_like);
    for a in &standing.conditional_on {
        println!("  relying on {} over {:?} ({})", a.tau, a.vertices, a.provenance);
    }
    let verdict = check_semistable(&cover, &standing)?;
    println!("semistable by the edge test: {}", verdict.semistable);
    for e in &verdict.failing_edges {
        println!("  fails at {}", e.label);
    }
    assert_eq!(verdict.failing_edges.len(), 1);

    if let Some(x) = cover.x_skeleton() {
        let r = pgroup_corollary_check(&cover, x)?;
        println!("one end, h1 = h1c = csp = {}: {}", r.h1, r.holds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
