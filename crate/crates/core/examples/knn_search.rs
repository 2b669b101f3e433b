//! k-nearest neighbors with both index types and every traversal.
//!
//! Run with `cargo run --release --example knn_search`.

use std::time::Instant;

use mlcore::prelude::*;

fn main() -> Result<()> {
    let mut rng = SeededRng::new(7);
    let reference = generate_uniform(20_000, 4, &mut rng)?;
    let queries = generate_uniform(5, 4, &mut rng)?;

    let kd = KdTree::new(&reference, EuclideanDistance, DEFAULT_LEAF_SIZE)?;
    let cover = CoverTree::new(&reference, EuclideanDistance, DEFAULT_BASE)?;
    println!("kd tree: {} nodes, depth {}", kd.node_count(), kd.depth());
    println!("cover tree: {} nodes", cover.node_count());

    let naive = nearest(&kd, QuerySet::Points(&queries), 3, Traversal::Naive)?;
    for traversal in [Traversal::SingleTree, Traversal::DualTree] {
        let t = Instant::now();
        let a = nearest(&kd, QuerySet::Points(&queries), 3, traversal)?;
        let b = nearest(&cover, QuerySet::Points(&queries), 3, traversal)?;
        assert_eq!(a, naive);
        assert_eq!(b, naive);
        println!("{traversal}: kd and cover agree with brute force ({:.1?})", t.elapsed());
    }

    for q in 0..queries.len() {
        println!("query {q}: neighbors {:?} at {:?}", naive.neighbors(q), naive.distances_of(q));
    }

    // Monochromatic search: every point against the rest of the set.
    let t = Instant::now();
    let all = nearest(&kd, QuerySet::Reference, 1, Traversal::DualTree)?;
    let mean = all.distances().iter().sum::<f64>() / all.len() as f64;
    println!("mean nearest-neighbor distance over {} points: {mean:.4} ({:.1?})", all.len(), t.elapsed());
    Ok(())
}
