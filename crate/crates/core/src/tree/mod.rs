//! Space-partitioning indexes.
//!
//! Both index families expose the same [`SpaceTree`] surface: a rooted tree
//! of nodes identified by `usize`, points held at leaves, and lower/upper
//! distance bounds between a node and a point or another node. The
//! neighbor and range searches are written once against this trait.

mod bound;
mod cover;
mod kd;

pub use bound::HRectBound;
pub use cover::{CoverNode, CoverTree, DEFAULT_BASE};
pub use kd::{KdNode, KdSplit, KdTree, DEFAULT_LEAF_SIZE};

use crate::data::DataMatrix;
use crate::error::Result;
use crate::metric::Metric;

pub trait SpaceTree<'a>: Sized + Sync {
    type Metric: Metric;

    fn data(&self) -> &'a DataMatrix;

    fn metric(&self) -> &Self::Metric;

    fn root(&self) -> usize;

    fn node_count(&self) -> usize;

    fn children(&self, node: usize) -> &[usize];

    /// Point indices stored directly at `node`. Empty for internal nodes.
    fn node_points(&self, node: usize) -> &[usize];

    /// Coordinates of the points in [`SpaceTree::node_points`], row-major
    /// and contiguous, so leaf scans read memory sequentially.
    fn node_coords(&self, node: usize) -> &[f64];

    /// `(index, coordinates)` of each point stored at `node`.
    fn leaf_entries(&self, node: usize) -> impl Iterator<Item = (usize, &[f64])> {
        let dim = self.data().dim();
        self.node_points(node).iter().copied().zip(self.node_coords(node).chunks_exact(dim))
    }

    /// Appends every point index held in the subtree of `node`.
    fn descendants(&self, node: usize, out: &mut Vec<usize>);

    /// Lower bound on the distance from `q` to any point under `node`.
    fn min_distance_to_point(&self, node: usize, q: &[f64]) -> f64;

    /// Upper bound on the distance from `q` to any point under `node`.
    fn max_distance_to_point(&self, node: usize, q: &[f64]) -> f64;

    /// Lower bound on the distance between points under `node` and points
    /// under `other_node` of `other`.
    fn min_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64;

    fn max_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64;

    /// A tree of the same kind and parameters built over `data`, used as the
    /// query tree of a dual-tree search.
    fn build_sibling(&self, data: &'a DataMatrix) -> Result<Self>;

    /// Rough size of `node`. When both nodes of a dual-tree pair have
    /// children, the traversal descends the larger one.
    fn node_radius(&self, node: usize) -> f64;

    fn is_leaf(&self, node: usize) -> bool {
        self.children(node).is_empty()
    }
}
