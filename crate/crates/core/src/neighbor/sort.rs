use std::fmt::Debug;

use crate::tree::SpaceTree;

/// Nearest/furthest duality: what "better" means for a distance, the value
/// an unfilled slot holds, and which node bound decides pruning.
pub trait SortPolicy: Copy + Default + Debug + Send + Sync + 'static {
    /// Value held by an unfilled result slot; every real distance beats or ties it.
    const WORST: f64;

    /// The best distance any candidate could have.
    const BEST: f64;

    /// Strictly better.
    fn is_better(a: f64, b: f64) -> bool;

    /// The most optimistic distance from `q` to anything under `node`.
    fn best_point_bound<'a, T: SpaceTree<'a>>(tree: &T, node: usize, q: &[f64]) -> f64;

    /// The most optimistic distance between anything under the two nodes.
    fn best_node_bound<'a, T: SpaceTree<'a>>(qtree: &T, qnode: usize, rtree: &T, rnode: usize) -> f64;

    #[inline]
    fn worse_of(a: f64, b: f64) -> f64 {
        if Self::is_better(a, b) {
            b
        } else {
            a
        }
    }

    /// Candidate `(da, ia)` beats `(db, ib)`: better distance, or equal
    /// distance and smaller index.
    #[inline]
    fn beats(da: f64, ia: usize, db: f64, ib: usize) -> bool {
        Self::is_better(da, db) || (da == db && ia < ib)
    }

    /// A region whose best bound is strictly worse than the current k-th
    /// result can hold nothing that would enter the result.
    #[inline]
    fn can_prune(bound: f64, kth: f64) -> bool {
        Self::is_better(kth, bound)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NearestNeighborSort;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FurthestNeighborSort;

impl SortPolicy for NearestNeighborSort {
    const WORST: f64 = f64::INFINITY;
    const BEST: f64 = 0.0;

    #[inline]
    fn is_better(a: f64, b: f64) -> bool {
        a < b
    }

    #[inline]
    fn best_point_bound<'a, T: SpaceTree<'a>>(tree: &T, node: usize, q: &[f64]) -> f64 {
        tree.min_distance_to_point(node, q)
    }

    #[inline]
    fn best_node_bound<'a, T: SpaceTree<'a>>(qtree: &T, qnode: usize, rtree: &T, rnode: usize) -> f64 {
        qtree.min_distance_to_node(qnode, rtree, rnode)
    }
}

impl SortPolicy for FurthestNeighborSort {
    const WORST: f64 = 0.0;
    const BEST: f64 = f64::INFINITY;

    #[inline]
    fn is_better(a: f64, b: f64) -> bool {
        a > b
    }

    #[inline]
    fn best_point_bound<'a, T: SpaceTree<'a>>(tree: &T, node: usize, q: &[f64]) -> f64 {
        tree.max_distance_to_point(node, q)
    }

    #[inline]
    fn best_node_bound<'a, T: SpaceTree<'a>>(qtree: &T, qnode: usize, rtree: &T, rnode: usize) -> f64 {
        qtree.max_distance_to_node(qnode, rtree, rnode)
    }
}

/// Fixed-capacity, best-first list of `(distance, index)` per query, stored
/// flat with stride `k`. Unfilled slots hold `(S::WORST, usize::MAX)`.
#[derive(Debug, Clone)]
pub(crate) struct CandidateLists<S> {
    k: usize,
    slots: Vec<(f64, usize)>,
    _policy: std::marker::PhantomData<S>,
}

impl<S: SortPolicy> CandidateLists<S> {
    pub(crate) fn new(queries: usize, k: usize) -> Self {
        CandidateLists {
            k,
            slots: vec![(S::WORST, usize::MAX); queries * k],
            _policy: std::marker::PhantomData,
        }
    }

    /// Distance of the k-th entry for query `q`.
    #[inline]
    pub(crate) fn kth(&self, q: usize) -> f64 {
        self.slots[q * self.k + self.k - 1].0
    }

    #[inline]
    pub(crate) fn offer(&mut self, q: usize, dist: f64, index: usize) {
        let list = &mut self.slots[q * self.k..(q + 1) * self.k];
        let (kd, ki) = list[list.len() - 1];
        if !S::beats(dist, index, kd, ki) {
            return;
        }
        let mut pos = list.len() - 1;
        while pos > 0 && S::beats(dist, index, list[pos - 1].0, list[pos - 1].1) {
            list[pos] = list[pos - 1];
            pos -= 1;
        }
        list[pos] = (dist, index);
    }

    pub(crate) fn into_parts(self) -> (Vec<usize>, Vec<f64>) {
        self.slots.into_iter().map(|(d, i)| (i, d)).unzip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_go_to_lower_index() {
        let mut lists = CandidateLists::<NearestNeighborSort>::new(1, 2);
        lists.offer(0, 1.0, 7);
        lists.offer(0, 1.0, 3);
        lists.offer(0, 1.0, 5);
        let (idx, dist) = lists.into_parts();
        assert_eq!(idx, vec![3, 5]);
        assert_eq!(dist, vec![1.0, 1.0]);
    }

    #[test]
    fn furthest_keeps_largest() {
        let mut lists = CandidateLists::<FurthestNeighborSort>::new(1, 2);
        for (d, i) in [(0.0, 0), (3.0, 1), (1.0, 2), (3.0, 3)] {
            lists.offer(0, d, i);
        }
        assert_eq!(lists.kth(0), 3.0);
        let (idx, _) = lists.into_parts();
        assert_eq!(idx, vec![1, 3]);
    }

    #[test]
    fn zero_distance_fills_furthest_slot() {
        let mut lists = CandidateLists::<FurthestNeighborSort>::new(1, 1);
        lists.offer(0, 0.0, 4);
        let (idx, _) = lists.into_parts();
        assert_eq!(idx, vec![4]);
    }

    #[test]
    fn prune_is_strict() {
        assert!(!NearestNeighborSort::can_prune(1.0, 1.0));
        assert!(NearestNeighborSort::can_prune(1.5, 1.0));
        assert!(!NearestNeighborSort::can_prune(0.5, f64::INFINITY));
        assert!(FurthestNeighborSort::can_prune(0.5, 1.0));
        assert!(!FurthestNeighborSort::can_prune(1.0, 1.0));
    }
}
