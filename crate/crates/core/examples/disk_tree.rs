// Minimal tree of disks supporting a handful of 2-adic disks.
//
// Run with `cargo run --example disk_tree`.

use nacurve::disks::{closure, ClosedDisk};
use nacurve::tree::{minimal_supporting_model, supports, tree_to_skeleton, Parent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let input = [
        ClosedDisk::from_ints(0, 2, 1, 2)?,
        ClosedDisk::from_ints(2, 3, 1, 2)?,
        ClosedDisk::from_ints(4, 2, 1, 2)?, // same set as D(0, 2)
        ClosedDisk::from_ints(8, 5, 2, 2)?,
    ];
    let closed = closure(&input)?;
    println!("closure: {}", closed.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));

    let tree = minimal_supporting_model(&input)?;
    assert!(supports(&tree, &input));
    for e in tree.edges() {
        let tail = match e.parent {
            Parent::Root => "∂".to_string(),
            Parent::Vertex(w) => tree.vertices()[w].to_string(),
        };
        println!("{tail} -> {}  thickness {}", tree.vertices()[e.child], e.thickness);
    }

    // thickness adds up along paths: the total is the radius of the leaf
    for (v, d) in tree.vertices().iter().enumerate() {
        let total: nacurve::ultrametric::Rational = tree.path_to(v).iter().map(|&u| tree.thickness(u)).sum();
        assert_eq!(&total, d.radius_val());
    }

    let skeleton = tree_to_skeleton(&tree);
    println!(
        "as a skeleton: {} vertices, {} edges, {} leg",
        skeleton.num_vertices(),
        skeleton.edges().len(),
        skeleton.legs().len()
    );
    println!("{}", tree.to_dot());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
