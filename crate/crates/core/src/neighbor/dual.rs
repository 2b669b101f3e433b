use super::single::{order, Walk};
use super::sort::{CandidateLists, SortPolicy};
use super::PruneObserver;
use crate::tree::SpaceTree;

/// Simultaneous recursion over a query tree and a reference tree.
///
/// Each query node caches the worst k-th candidate distance among the
/// queries it holds; a node pair whose best bound is strictly worse than
/// that value is skipped. When both nodes have children the query node is
/// split unless the reference node is more than twice its radius; reference
/// children are visited best bound first.
///
/// A query leaf is treated as if each of its points were a child of its
/// own: every point walks the reference subtree with its own tight bound.
/// Point bounds are much tighter than box-to-box bounds once the dimension
/// grows, hence the bias towards reaching query leaves early.
pub(crate) fn search<'a, T, S, O>(
    qtree: &T,
    rtree: &T,
    mono: bool,
    k: usize,
    observer: &mut O,
) -> CandidateLists<S>
where
    T: SpaceTree<'a>,
    S: SortPolicy,
    O: PruneObserver,
{
    let mut state = Dual {
        qtree,
        rtree,
        mono,
        lists: CandidateLists::new(qtree.data().len(), k),
        node_bound: vec![S::WORST; qtree.node_count()],
        parent: parents(qtree),
        q_radius: radii(qtree),
        r_radius: radii(rtree),
        observer,
    };
    let (qroot, rroot) = (qtree.root(), rtree.root());
    let bound = S::best_node_bound(qtree, qroot, rtree, rroot);
    state.visit(qroot, rroot, bound);
    state.lists
}

fn radii<'a, T: SpaceTree<'a>>(tree: &T) -> Vec<f64> {
    (0..tree.node_count()).map(|n| tree.node_radius(n)).collect()
}

fn parents<'a, T: SpaceTree<'a>>(tree: &T) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.node_count()];
    let mut stack = vec![tree.root()];
    while let Some(n) = stack.pop() {
        for &c in tree.children(n) {
            parent[c] = n;
            stack.push(c);
        }
    }
    parent
}

struct Dual<'t, T, S, O> {
    qtree: &'t T,
    rtree: &'t T,
    mono: bool,
    lists: CandidateLists<S>,
    node_bound: Vec<f64>,
    parent: Vec<usize>,
    q_radius: Vec<f64>,
    r_radius: Vec<f64>,
    observer: &'t mut O,
}

impl<'a, T, S, O> Dual<'_, T, S, O>
where
    T: SpaceTree<'a>,
    S: SortPolicy,
    O: PruneObserver,
{
    fn visit(&mut self, qn: usize, rn: usize, bound: f64) {
        self.inherit(qn);
        if S::can_prune(bound, self.node_bound[qn]) {
            self.observer.pruned_pair(qn, rn);
            return;
        }
        let (qtree, rtree) = (self.qtree, self.rtree);
        let qc = qtree.children(qn);
        let rc = rtree.children(rn);
        if qc.is_empty() {
            self.leaf_walk(qn, rn, bound);
        } else if rc.is_empty() || (!qc.is_empty() && 2.0 * self.q_radius[qn] >= self.r_radius[rn]) {
            // Descend the query side.
            for &c in qc {
                let b = S::best_node_bound(qtree, c, rtree, rn);
                self.visit(c, rn, b);
            }
            self.refresh(qn);
        } else if let &[a, b] = rc {
            let ba = S::best_node_bound(qtree, qn, rtree, a);
            let bb = S::best_node_bound(qtree, qn, rtree, b);
            if S::is_better(bb, ba) {
                self.visit(qn, b, bb);
                self.visit(qn, a, ba);
            } else {
                self.visit(qn, a, ba);
                self.visit(qn, b, bb);
            }
        } else {
            let mut scored: Vec<(f64, usize)> =
                rc.iter().map(|&c| (S::best_node_bound(qtree, qn, rtree, c), c)).collect();
            scored.sort_by(|x, y| order::<S>(x, y));
            for (b, c) in scored {
                self.visit(qn, c, b);
            }
        }
    }

    /// `pair_bound` is the best bound between the query leaf and `rn`; a
    /// query whose k-th distance already beats it needs no point-level work.
    fn leaf_walk(&mut self, qn: usize, rn: usize, pair_bound: f64) {
        let (qtree, rtree) = (self.qtree, self.rtree);
        let mut worst = S::BEST;
        for (q, qp) in qtree.leaf_entries(qn) {
            if S::can_prune(pair_bound, self.lists.kth(q)) {
                self.observer.pruned_point(q, rn);
            } else {
                let mut walk = Walk {
                    tree: rtree,
                    q: qp,
                    qi: q,
                    mono: self.mono,
                    lists: &mut self.lists,
                    observer: &mut *self.observer,
                };
                walk.visit(rn, S::best_point_bound(rtree, rn, qp));
            }
            worst = S::worse_of(worst, self.lists.kth(q));
        }
        self.node_bound[qn] = worst;
    }

    /// A query node's queries are a subset of its parent's, so the
    /// parent's cached bound also holds for the child.
    fn inherit(&mut self, qn: usize) {
        let parent = self.parent[qn];
        if parent != usize::MAX && S::is_better(self.node_bound[parent], self.node_bound[qn]) {
            self.node_bound[qn] = self.node_bound[parent];
        }
    }

    fn refresh(&mut self, qn: usize) {
        let children = self.qtree.children(qn);
        let mut worst = S::BEST;
        for &c in children {
            worst = S::worse_of(worst, self.node_bound[c]);
        }
        self.node_bound[qn] = worst;
    }
}
