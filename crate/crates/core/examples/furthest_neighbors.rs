//! Furthest-neighbor search: the same trees and traversals with the sort
//! policy flipped.

use mlcore::prelude::*;

fn main() -> Result<()> {
    let points = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [3.6, 0.0], [0.5, 0.5], [-2.0, 1.0]])?;
    let tree = KdTree::new(&points, EuclideanDistance, 1)?;

    let far = furthest(&tree, QuerySet::Reference, 2, Traversal::DualTree)?;
    for q in 0..points.len() {
        println!("{:?}: furthest {:?} at {:?}", points.point(q), far.neighbors(q), far.distances_of(q));
    }

    // The generic entry point takes the policy as a type parameter.
    let cover = CoverTree::new(&points, ManhattanDistance, 2.0)?;
    let l1 = knn_search::<_, FurthestNeighborSort>(&cover, QuerySet::Reference, 1, Traversal::SingleTree)?;
    println!("L1 furthest: {:?}", l1.indices());
    Ok(())
}
