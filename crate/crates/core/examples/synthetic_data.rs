//! Seeded uniform data and the CSV round trip.

use mlcore::data::save_index_csv;
use mlcore::prelude::*;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("mlcore-synthetic-example");
    std::fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;

    // Same seed, same data, on every platform.
    let a = generate_uniform(1_000, 10, &mut SeededRng::new(1))?;
    let b = generate_uniform(1_000, 10, &mut SeededRng::new(1))?;
    assert_eq!(a, b);

    let path = dir.join("randu.csv");
    save_csv(&a, &path)?;
    let back = load_csv(&path, false)?;
    assert_eq!(a, back);
    println!("wrote and reloaded {}x{} from {}", back.len(), back.dim(), path.display());

    let tree = KdTree::new(&back, EuclideanDistance, DEFAULT_LEAF_SIZE)?;
    let knn = nearest(&tree, QuerySet::Reference, 3, Traversal::DualTree)?;
    let out = dir.join("neighbors.csv");
    save_index_csv(knn.indices(), 3, &out)?;
    println!("neighbor indices (0-based) in {}", out.display());
    Ok(())
}
