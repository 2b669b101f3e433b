use super::sort::{CandidateLists, SortPolicy};
use super::PruneObserver;
use crate::data::DataMatrix;
use crate::metric::Metric;
use crate::tree::SpaceTree;

/// Depth-first search from the root for each query, visiting children in
/// order of their bound.
pub(crate) fn search<'a, T, S, O>(
    tree: &T,
    queries: &DataMatrix,
    mono: bool,
    k: usize,
    observer: &mut O,
) -> CandidateLists<S>
where
    T: SpaceTree<'a>,
    S: SortPolicy,
    O: PruneObserver,
{
    let mut lists = CandidateLists::new(queries.len(), k);
    let root = tree.root();
    for (qi, q) in queries.points().enumerate() {
        let mut walk = Walk {
            tree,
            q,
            qi,
            mono,
            lists: &mut lists,
            observer: &mut *observer,
        };
        let bound = S::best_point_bound(tree, root, q);
        walk.visit(root, bound);
    }
    lists
}

/// One query point descending a reference tree.
pub(crate) struct Walk<'t, 'q, T, S, O> {
    pub(crate) tree: &'t T,
    pub(crate) q: &'q [f64],
    pub(crate) qi: usize,
    pub(crate) mono: bool,
    pub(crate) lists: &'t mut CandidateLists<S>,
    pub(crate) observer: &'t mut O,
}

impl<'a, T, S, O> Walk<'_, '_, T, S, O>
where
    T: SpaceTree<'a>,
    S: SortPolicy,
    O: PruneObserver,
{
    pub(crate) fn visit(&mut self, node: usize, bound: f64) {
        if S::can_prune(bound, self.lists.kth(self.qi)) {
            self.observer.pruned_point(self.qi, node);
            return;
        }
        let tree = self.tree;
        let children = tree.children(node);
        match children {
            [] => {
                let metric = tree.metric();
                for (r, rp) in tree.leaf_entries(node) {
                    if self.mono && r == self.qi {
                        continue;
                    }
                    let d = metric.distance(self.q, rp);
                    self.lists.offer(self.qi, d, r);
                }
            }
            &[a, b] => {
                let ba = S::best_point_bound(tree, a, self.q);
                let bb = S::best_point_bound(tree, b, self.q);
                if S::is_better(bb, ba) {
                    self.visit(b, bb);
                    self.visit(a, ba);
                } else {
                    self.visit(a, ba);
                    self.visit(b, bb);
                }
            }
            _ => {
                let mut scored: Vec<(f64, usize)> = children
                    .iter()
                    .map(|&c| (S::best_point_bound(tree, c, self.q), c))
                    .collect();
                scored.sort_by(|x, y| order::<S>(x, y));
                for (b, c) in scored {
                    self.visit(c, b);
                }
            }
        }
    }
}

/// Best bound first; stable on ties so the visit order is deterministic.
pub(crate) fn order<S: SortPolicy>(x: &(f64, usize), y: &(f64, usize)) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if S::is_better(x.0, y.0) {
        Ordering::Less
    } else if S::is_better(y.0, x.0) {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}
