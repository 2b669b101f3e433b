use super::{HRectBound, SpaceTree};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::Metric;

pub const DEFAULT_LEAF_SIZE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdSplit {
    pub dim: usize,
    /// Left subtree holds coordinates `<= value`, right subtree `> value`.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct KdNode {
    bound: HRectBound,
    begin: usize,
    count: usize,
    split: Option<KdSplit>,
    children: Option<[usize; 2]>,
}

impl KdNode {
    pub fn bound(&self) -> &HRectBound {
        &self.bound
    }

    /// Range `[begin, begin + count)` of the tree's permutation covered by this node.
    pub fn range(&self) -> std::ops::Range<usize> {
        self.begin..self.begin + self.count
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn split(&self) -> Option<KdSplit> {
        self.split
    }

    pub fn children(&self) -> Option<[usize; 2]> {
        self.children
    }
}

/// Binary space-partitioning tree with a tight bounding box per node.
///
/// Points are never copied: the tree keeps a permutation of point indices
/// and every node covers a contiguous range of it. Splits go through the
/// midpoint of the widest dimension; when that leaves a side empty (only
/// possible through rounding) the lower median is used instead. A node
/// whose points are all identical stays a leaf even above `leaf_size`,
/// since no axis split can separate them.
#[derive(Debug, Clone)]
pub struct KdTree<'a, M> {
    data: &'a DataMatrix,
    metric: M,
    leaf_size: usize,
    nodes: Vec<KdNode>,
    permutation: Vec<usize>,
    /// The dataset rows in permutation order.
    ordered: Vec<f64>,
}

impl<'a, M: Metric> KdTree<'a, M> {
    pub fn new(data: &'a DataMatrix, metric: M, leaf_size: usize) -> Result<Self> {
        if leaf_size == 0 {
            return Err(Error::invalid("leaf size must be at least 1"));
        }
        let mut tree = KdTree {
            data,
            metric,
            leaf_size,
            nodes: Vec::with_capacity(2 * data.len() / leaf_size + 1),
            permutation: (0..data.len()).collect(),
            ordered: Vec::new(),
        };
        tree.build_node(0, data.len());
        tree.ordered = tree.permutation.iter().flat_map(|&i| data.point(i)).copied().collect();
        Ok(tree)
    }

    fn build_node(&mut self, begin: usize, count: usize) -> usize {
        let data = self.data;
        let idx = &self.permutation[begin..begin + count];
        let bound = HRectBound::enclosing(data.dim(), idx.iter().map(|&i| data.point(i)));
        let id = self.nodes.len();

        let (dim, width) = (0..data.dim())
            .map(|j| (j, bound.width(j)))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        let splittable = count > self.leaf_size && width > 0.0;
        let split_value = splittable.then(|| 0.5 * (bound.lo()[dim] + bound.hi()[dim]));

        self.nodes.push(KdNode {
            bound,
            begin,
            count,
            split: None,
            children: None,
        });
        let Some(mut value) = split_value else {
            return id;
        };

        let mut left_count = self.partition(begin, count, dim, value);
        if left_count == 0 || left_count == count {
            value = self.median_value(begin, count, dim);
            left_count = self.partition(begin, count, dim, value);
        }
        debug_assert!(left_count > 0 && left_count < count);

        let left = self.build_node(begin, left_count);
        let right = self.build_node(begin + left_count, count - left_count);
        let node = &mut self.nodes[id];
        node.split = Some(KdSplit { dim, value });
        node.children = Some([left, right]);
        id
    }

    /// Stable partition of the range: coordinates `<= value` first.
    fn partition(&mut self, begin: usize, count: usize, dim: usize, value: f64) -> usize {
        let data = self.data;
        let slot = &mut self.permutation[begin..begin + count];
        let (left, right): (Vec<usize>, Vec<usize>) =
            slot.iter().partition(|&&i| data.point(i)[dim] <= value);
        let n_left = left.len();
        slot[..n_left].copy_from_slice(&left);
        slot[n_left..].copy_from_slice(&right);
        n_left
    }

    /// Lower median of the coordinate; if it equals the maximum, the largest
    /// value strictly below the maximum, so both sides are non-empty.
    fn median_value(&self, begin: usize, count: usize, dim: usize) -> f64 {
        let mut coords: Vec<f64> = self.permutation[begin..begin + count]
            .iter()
            .map(|&i| self.data.point(i)[dim])
            .collect();
        coords.sort_by(f64::total_cmp);
        let median = coords[(count - 1) / 2];
        let max = coords[count - 1];
        if median < max {
            median
        } else {
            coords.iter().rev().copied().find(|&c| c < max).unwrap_or(median)
        }
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    pub fn nodes(&self) -> &[KdNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &KdNode {
        &self.nodes[id]
    }

    /// Tree order to original point index.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn walk<M>(t: &KdTree<'_, M>, n: usize) -> usize {
            match t.nodes[n].children {
                Some([l, r]) => 1 + walk(t, l).max(walk(t, r)),
                None => 0,
            }
        }
        walk(self, 0)
    }
}

impl<'a, M: Metric> SpaceTree<'a> for KdTree<'a, M> {
    type Metric = M;

    fn data(&self) -> &'a DataMatrix {
        self.data
    }

    fn metric(&self) -> &M {
        &self.metric
    }

    fn root(&self) -> usize {
        0
    }

    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn children(&self, node: usize) -> &[usize] {
        self.nodes[node].children.as_ref().map_or(&[], |c| &c[..])
    }

    fn node_points(&self, node: usize) -> &[usize] {
        let n = &self.nodes[node];
        if n.children.is_some() {
            &[]
        } else {
            &self.permutation[n.range()]
        }
    }

    fn node_coords(&self, node: usize) -> &[f64] {
        let n = &self.nodes[node];
        if n.children.is_some() {
            &[]
        } else {
            let d = self.data.dim();
            &self.ordered[n.begin * d..(n.begin + n.count) * d]
        }
    }

    fn descendants(&self, node: usize, out: &mut Vec<usize>) {
        out.extend_from_slice(&self.permutation[self.nodes[node].range()]);
    }

    #[inline]
    fn min_distance_to_point(&self, node: usize, q: &[f64]) -> f64 {
        self.nodes[node].bound.min_point(q, &self.metric)
    }

    #[inline]
    fn max_distance_to_point(&self, node: usize, q: &[f64]) -> f64 {
        self.nodes[node].bound.max_point(q, &self.metric)
    }

    #[inline]
    fn min_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64 {
        self.nodes[node].bound.min_bound(&other.nodes[other_node].bound, &self.metric)
    }

    #[inline]
    fn max_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64 {
        self.nodes[node].bound.max_bound(&other.nodes[other_node].bound, &self.metric)
    }

    fn node_radius(&self, node: usize) -> f64 {
        let b = &self.nodes[node].bound;
        0.5 * self.metric.norm((0..b.dim()).map(|j| b.width(j)))
    }

    fn build_sibling(&self, data: &'a DataMatrix) -> Result<Self> {
        KdTree::new(data, self.metric.clone(), self.leaf_size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::EuclideanDistance;

    #[test]
    fn single_point_is_one_leaf() {
        let data = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let tree = KdTree::new(&data, EuclideanDistance, DEFAULT_LEAF_SIZE).unwrap();
        assert_eq!(tree.nodes().len(), 1);
        assert!(tree.is_leaf(0));
        assert_eq!(tree.node_points(0), &[0]);
    }

    #[test]
    fn collinear_points_stay_shallow() {
        let rows: Vec<[f64; 1]> = (0..100).map(|i| [i as f64]).collect();
        let data = DataMatrix::from_rows(&rows).unwrap();
        let tree = KdTree::new(&data, EuclideanDistance, 1).unwrap();
        // 2 * ceil(log2(100))
        assert!(tree.depth() <= 14, "depth {}", tree.depth());
        let leaves = tree.nodes().iter().filter(|n| n.children().is_none()).count();
        assert_eq!(leaves, 100);
    }

    #[test]
    fn identical_points_form_one_leaf() {
        let data = DataMatrix::from_rows(&vec![[0.5, 0.5]; 30]).unwrap();
        let tree = KdTree::new(&data, EuclideanDistance, 4).unwrap();
        assert_eq!(tree.nodes().len(), 1);
        assert_eq!(tree.node(0).count(), 30);
    }

    #[test]
    fn median_fallback_when_midpoint_rounds_to_an_end() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let data = DataMatrix::from_rows(&[[a], [a], [b], [b]]).unwrap();
        let tree = KdTree::new(&data, EuclideanDistance, 1).unwrap();
        let split = tree.node(0).split().unwrap();
        let [l, r] = tree.node(0).children().unwrap();
        assert_eq!(tree.node(l).count(), 2);
        assert_eq!(tree.node(r).count(), 2);
        assert_eq!(split.value, a);
    }

    #[test]
    fn zero_leaf_size_rejected() {
        let data = DataMatrix::from_rows(&[[1.0]]).unwrap();
        assert!(KdTree::new(&data, EuclideanDistance, 0).is_err());
    }
}
