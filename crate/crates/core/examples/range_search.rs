//! All neighbors inside a distance band.

use mlcore::prelude::*;

fn main() -> Result<()> {
    let mut rng = SeededRng::new(3);
    let reference = generate_uniform(2_000, 3, &mut rng)?;
    let queries = generate_uniform(3, 3, &mut rng)?;

    let tree = KdTree::new(&reference, EuclideanDistance, DEFAULT_LEAF_SIZE)?;
    let shell = range_search(&tree, QuerySet::Points(&queries), 0.05, 0.1, Traversal::DualTree)?;
    for (q, hits) in shell.iter().enumerate() {
        println!("query {q}: {} points between 0.05 and 0.1", hits.len());
        for (index, dist) in hits.iter().take(3) {
            println!("  {index} at {dist:.4}");
        }
    }

    let cover = CoverTree::new(&reference, EuclideanDistance, 1.3)?;
    let same = range_search(&cover, QuerySet::Points(&queries), 0.05, 0.1, Traversal::SingleTree)?;
    assert_eq!(shell, same);

    // The line format the command-line tool writes.
    print!("{}", same.to_lines().lines().next().unwrap_or_default().chars().take(120).collect::<String>());
    println!();
    Ok(())
}
