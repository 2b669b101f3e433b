//! k-means with the initialization and empty-cluster policies swapped in
//! and out.

use mlcore::kmeans::{objective, ClusteringResult};
use mlcore::prelude::*;

fn blobs(rng: &mut SeededRng) -> Result<DataMatrix> {
    let centres = [[0.0, 0.0], [5.0, 5.0], [0.0, 8.0]];
    let mut rows = Vec::new();
    for c in centres {
        for _ in 0..200 {
            rows.push([c[0] + rng.next_f64() - 0.5, c[1] + rng.next_f64() - 0.5]);
        }
    }
    DataMatrix::from_rows(&rows)
}

fn show(name: &str, r: &ClusteringResult) {
    println!(
        "{name}: objective {:.3} after {} iterations (converged: {})",
        r.objective, r.iterations, r.converged
    );
}

fn main() -> Result<()> {
    let data = blobs(&mut SeededRng::new(11))?;

    let plain = KMeans::new(3).seed(1).cluster(&data)?;
    show("random partition", &plain);

    let pp = KMeans::new(3)
        .initialization(KMeansPlusPlusInitialization)
        .seed(1)
        .cluster(&data)?;
    show("k-means++", &pp);
    for c in pp.centroids.points() {
        println!("  centroid {c:.2?}");
    }

    // Fixed starting centroids, one of them far from everything. Allowed to
    // stay empty it never moves; reseeding pulls it back into the data.
    let start = DataMatrix::from_rows(&[[0.0, 0.0], [5.0, 5.0], [100.0, 100.0]])?;
    let allow = KMeans::new(3).empty_clusters(AllowEmptyClusters).cluster_from(&data, &start)?;
    let reseed = KMeans::new(3).empty_clusters(ReseedFurthest).cluster_from(&data, &start)?;
    show("allow empty", &allow);
    show("reseed furthest", &reseed);

    for (i, step) in allow.trace.iter().enumerate() {
        println!("  iteration {}: objective {:.3}, moved {:.4}", i + 1, step.objective, step.moved);
    }

    let l1 = KMeans::new(3).metric(ManhattanDistance).seed(1).cluster(&data)?;
    println!("L1 assignment objective: {:.3}", objective(&data, &l1.centroids, &l1.assignments, &ManhattanDistance));
    Ok(())
}
