use super::*;
use crate::data::generate_uniform;
use crate::metric::{EuclideanDistance, ManhattanDistance};
use crate::rng::SeededRng;
use crate::tree::{CoverTree, KdTree};

fn line() -> DataMatrix {
    DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [4.0, 0.0]]).unwrap()
}

#[test]
fn brute_force_nearest_two() {
    let reference = line();
    let query = DataMatrix::from_rows(&[[0.4, 0.0]]).unwrap();
    let res = brute_force_search::<_, NearestNeighborSort>(
        &reference,
        QuerySet::Points(&query),
        2,
        &EuclideanDistance,
    )
    .unwrap();
    assert_eq!(res.neighbors(0), &[0, 1]);
    assert_eq!(res.distances_of(0), &[0.4, 0.6]);
}

#[test]
fn brute_force_furthest_one() {
    let reference = line();
    let query = DataMatrix::from_rows(&[[0.4, 0.0]]).unwrap();
    let res = brute_force_search::<_, FurthestNeighborSort>(
        &reference,
        QuerySet::Points(&query),
        1,
        &EuclideanDistance,
    )
    .unwrap();
    assert_eq!(res.neighbors(0), &[2]);
    assert_eq!(res.distances_of(0), &[3.6]);
}

#[test]
fn monochromatic_excludes_self() {
    let reference = line();
    let res =
        brute_force_search::<_, NearestNeighborSort>(&reference, QuerySet::Reference, 1, &EuclideanDistance)
            .unwrap();
    assert_eq!(res.indices(), &[1, 0, 1]);
    let tree = KdTree::new(&reference, EuclideanDistance, 1).unwrap();
    for t in [Traversal::SingleTree, Traversal::DualTree, Traversal::Naive] {
        assert_eq!(nearest(&tree, QuerySet::Reference, 1, t).unwrap(), res);
    }
}

#[test]
fn k_bounds_enforced() {
    let reference = line();
    let tree = KdTree::new(&reference, EuclideanDistance, 2).unwrap();
    assert!(nearest(&tree, QuerySet::Reference, 3, Traversal::DualTree).is_err());
    assert!(nearest(&tree, QuerySet::Reference, 0, Traversal::DualTree).is_err());
    assert!(nearest(&tree, QuerySet::Points(&reference), 3, Traversal::DualTree).is_ok());
    let wrong = DataMatrix::from_rows(&[[1.0]]).unwrap();
    assert!(matches!(
        nearest(&tree, QuerySet::Points(&wrong), 1, Traversal::SingleTree),
        Err(Error::DimensionMismatch { expected: 2, found: 1 })
    ));
}

#[test]
fn duplicate_points_tie_break_by_index() {
    let data = DataMatrix::from_rows(&[[1.0], [0.0], [1.0], [1.0], [0.0]]).unwrap();
    let expected =
        brute_force_search::<_, NearestNeighborSort>(&data, QuerySet::Reference, 2, &ManhattanDistance).unwrap();
    assert_eq!(expected.neighbors(0), &[2, 3]);
    let kd = KdTree::new(&data, ManhattanDistance, 1).unwrap();
    let cover = CoverTree::new(&data, ManhattanDistance, 2.0).unwrap();
    for t in [Traversal::SingleTree, Traversal::DualTree] {
        assert_eq!(nearest(&kd, QuerySet::Reference, 2, t).unwrap(), expected);
        assert_eq!(nearest(&cover, QuerySet::Reference, 2, t).unwrap(), expected);
    }
}

#[test]
fn range_edge_cases() {
    let data = generate_uniform(60, 2, &mut SeededRng::new(4)).unwrap();
    let tree = KdTree::new(&data, EuclideanDistance, 5).unwrap();
    let empty = range_search(&tree, QuerySet::Reference, 0.0, 0.0, Traversal::SingleTree).unwrap();
    assert!(empty.iter().all(|l| l.is_empty()));
    let all = range_search(&tree, QuerySet::Points(&data), 0.0, f64::MAX, Traversal::DualTree).unwrap();
    for list in all.iter() {
        let idx: Vec<usize> = list.iter().map(|p| p.0).collect();
        assert_eq!(idx, (0..60).collect::<Vec<_>>());
    }
    assert!(range_search(&tree, QuerySet::Reference, 0.5, 0.2, Traversal::SingleTree).is_err());
    assert!(range_search(&tree, QuerySet::Reference, -1.0, 0.2, Traversal::SingleTree).is_err());
}

#[test]
fn range_lines_format() {
    let r = RangeResult::new(vec![vec![(3, 0.5), (1, 2.0)], vec![]]);
    assert_eq!(r.to_lines(), "1:2,3:0.5\n\n");
}

#[derive(Default)]
struct Recorder {
    points: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
}

impl PruneObserver for Recorder {
    fn pruned_point(&mut self, query: usize, node: usize) {
        self.points.push((query, node));
    }
    fn pruned_pair(&mut self, q: usize, r: usize) {
        self.pairs.push((q, r));
    }
}

/// No pruned region may contain a point that appears in the final result.
fn check_prune_soundness<'a, T: SpaceTree<'a>, S: SortPolicy>(tree: &T, k: usize) {
    let data = tree.data();
    let mut rec = Recorder::default();
    let single = single::search::<T, S, _>(tree, data, true, k, &mut rec);
    let single = NeighborResult::from_lists(single, k);
    let mut under = Vec::new();
    for &(q, node) in &rec.points {
        under.clear();
        tree.descendants(node, &mut under);
        assert!(single.neighbors(q).iter().all(|r| !under.contains(r)));
    }
    assert!(!rec.points.is_empty(), "expected the traversal to prune something");

    let mut rec = Recorder::default();
    let dual = dual::search::<T, S, _>(tree, tree, true, k, &mut rec);
    let dual = NeighborResult::from_lists(dual, k);
    let (mut qs, mut rs) = (Vec::new(), Vec::new());
    for &(qn, rn) in &rec.pairs {
        qs.clear();
        rs.clear();
        tree.descendants(qn, &mut qs);
        tree.descendants(rn, &mut rs);
        for &q in &qs {
            assert!(dual.neighbors(q).iter().all(|r| !rs.contains(r)));
        }
    }
    assert!(!rec.pairs.is_empty());
    for &(q, node) in &rec.points {
        rs.clear();
        tree.descendants(node, &mut rs);
        assert!(dual.neighbors(q).iter().all(|r| !rs.contains(r)));
    }
    let oracle = brute_force_search::<_, S>(data, QuerySet::Reference, k, tree.metric()).unwrap();
    assert_eq!(single, oracle);
    assert_eq!(dual, oracle);
}

#[test]
fn pruning_never_discards_results() {
    for seed in 0..4 {
        let data = generate_uniform(300, 3, &mut SeededRng::new(seed)).unwrap();
        let kd = KdTree::new(&data, EuclideanDistance, 8).unwrap();
        check_prune_soundness::<_, NearestNeighborSort>(&kd, 3);
        check_prune_soundness::<_, FurthestNeighborSort>(&kd, 3);
        let cover = CoverTree::new(&data, ManhattanDistance, 1.3).unwrap();
        check_prune_soundness::<_, NearestNeighborSort>(&cover, 3);
        check_prune_soundness::<_, FurthestNeighborSort>(&cover, 2);
    }
}

#[test]
fn concurrent_queries_match_sequential() {
    let data = generate_uniform(2000, 4, &mut SeededRng::new(8)).unwrap();
    let tree = KdTree::new(&data, EuclideanDistance, 10).unwrap();
    let expected = nearest(&tree, QuerySet::Reference, 5, Traversal::SingleTree).unwrap();
    let chunks: Vec<Vec<usize>> = (0..4).map(|c| (c * 500..(c + 1) * 500).collect()).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|rows| {
                let tree = &tree;
                let data = &data;
                s.spawn(move || {
                    let q = data.select(rows).unwrap();
                    let res = nearest(tree, QuerySet::Points(&q), 6, Traversal::SingleTree).unwrap();
                    (rows.clone(), res)
                })
            })
            .collect();
        for h in handles {
            let (rows, res) = h.join().unwrap();
            for (row, &q) in rows.iter().enumerate() {
                // bichromatic: the point itself comes first at distance 0
                assert_eq!(res.neighbors(row)[0], q);
                assert_eq!(&res.neighbors(row)[1..], expected.neighbors(q));
            }
        }
    });
}
