//! Plugging a user-defined distance into the trees and into k-means.
//!
//! A metric only has to fold per-coordinate gaps into a distance. Here the
//! Chebyshev (L-infinity) distance is used, which the crate does not ship.

use mlcore::prelude::*;

#[derive(Debug, Clone, Copy)]
struct Chebyshev;

impl Metric for Chebyshev {
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64 {
        abs_diffs.fold(0.0, f64::max)
    }
}

fn main() -> Result<()> {
    let data = generate_uniform(5_000, 3, &mut SeededRng::new(5))?;

    let kd = KdTree::new(&data, Chebyshev, DEFAULT_LEAF_SIZE)?;
    let cover = CoverTree::new(&data, Chebyshev, DEFAULT_BASE)?;
    let a = nearest(&kd, QuerySet::Reference, 4, Traversal::DualTree)?;
    let b = nearest(&cover, QuerySet::Reference, 4, Traversal::DualTree)?;
    let c = nearest(&kd, QuerySet::Reference, 4, Traversal::Naive)?;
    assert_eq!(a, c);
    assert_eq!(b, c);
    println!("point 0 nearest under L-inf: {:?} at {:?}", a.neighbors(0), a.distances_of(0));

    let clusters = KMeans::new(4).metric(Chebyshev).seed(2).cluster(&data)?;
    println!("k-means under L-inf: {} iterations, objective {:.3}", clusters.iterations, clusters.objective);

    // Runtime-selected metrics parse from the same strings the CLI accepts.
    for name in ["l1", "l2", "lp:3"] {
        let m: MetricKind = name.parse()?;
        println!("{name}: {}", m.distance(&[0.0, 0.0], &[3.0, 4.0]));
    }
    Ok(())
}
