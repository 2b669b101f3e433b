use crate::data::DataMatrix;
use crate::metric::Metric;
use crate::tree::SpaceTree;

/// Per-query lists of `(reference index, distance)` with the distance in
/// `[low, high]`, sorted by ascending index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RangeResult {
    lists: Vec<Vec<(usize, f64)>>,
}

impl RangeResult {
    pub(crate) fn new(mut lists: Vec<Vec<(usize, f64)>>) -> Self {
        for list in &mut lists {
            list.sort_by_key(|&(i, _)| i);
        }
        RangeResult { lists }
    }

    /// Number of query rows.
    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn neighbors(&self, query: usize) -> &[(usize, f64)] {
        &self.lists[query]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[(usize, f64)]> {
        self.lists.iter().map(Vec::as_slice)
    }

    /// One line per query: comma-separated `index:distance` pairs, empty
    /// line for an empty result.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for list in &self.lists {
            for (j, (i, d)) in list.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format!("{i}:{d}"));
            }
            out.push('\n');
        }
        out
    }
}

fn overlaps(min: f64, max: f64, low: f64, high: f64) -> bool {
    min <= high && max >= low
}

pub(crate) fn single<'a, T: SpaceTree<'a>>(
    tree: &T,
    queries: &DataMatrix,
    mono: bool,
    low: f64,
    high: f64,
) -> RangeResult {
    let metric = tree.metric();
    let lists = queries
        .points()
        .enumerate()
        .map(|(qi, q)| {
            let mut found = Vec::new();
            let mut stack = vec![tree.root()];
            while let Some(node) = stack.pop() {
                let min = tree.min_distance_to_point(node, q);
                let max = tree.max_distance_to_point(node, q);
                if !overlaps(min, max, low, high) {
                    continue;
                }
                for (r, rp) in tree.leaf_entries(node) {
                    if mono && r == qi {
                        continue;
                    }
                    let d = metric.distance(q, rp);
                    if low <= d && d <= high {
                        found.push((r, d));
                    }
                }
                stack.extend_from_slice(tree.children(node));
            }
            found
        })
        .collect();
    RangeResult::new(lists)
}

pub(crate) fn dual<'a, T: SpaceTree<'a>>(qtree: &T, rtree: &T, mono: bool, low: f64, high: f64) -> RangeResult {
    let mut lists = vec![Vec::new(); qtree.data().len()];
    let mut stack = vec![(qtree.root(), rtree.root())];
    let metric = rtree.metric();
    let q_radius: Vec<f64> = (0..qtree.node_count()).map(|n| qtree.node_radius(n)).collect();
    let r_radius: Vec<f64> = (0..rtree.node_count()).map(|n| rtree.node_radius(n)).collect();
    while let Some((qn, rn)) = stack.pop() {
        let min = qtree.min_distance_to_node(qn, rtree, rn);
        let max = qtree.max_distance_to_node(qn, rtree, rn);
        if !overlaps(min, max, low, high) {
            continue;
        }
        let (qc, rc) = (qtree.children(qn), rtree.children(rn));
        if qc.is_empty() && rc.is_empty() {
            for (q, qp) in qtree.leaf_entries(qn) {
                for (r, rp) in rtree.leaf_entries(rn) {
                    if mono && q == r {
                        continue;
                    }
                    let d = metric.distance(qp, rp);
                    if low <= d && d <= high {
                        lists[q].push((r, d));
                    }
                }
            }
        } else if rc.is_empty() || (!qc.is_empty() && q_radius[qn] >= r_radius[rn]) {
            stack.extend(qc.iter().map(|&c| (c, rn)));
        } else {
            stack.extend(rc.iter().map(|&c| (qn, c)));
        }
    }
    RangeResult::new(lists)
}
