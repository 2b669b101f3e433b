use super::SpaceTree;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::Metric;

pub const DEFAULT_BASE: f64 = 2.0;

/// Relative widening applied to triangle-inequality bounds so that rounding
/// in the distance evaluations can never make a bound cross the true value.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CoverNode {
    point: usize,
    scale: Option<i32>,
    children: Vec<usize>,
    furthest_descendant_distance: f64,
}

impl CoverNode {
    /// Index of the dataset point this node is centred on.
    pub fn point(&self) -> usize {
        self.point
    }

    /// Level `l` whose children lie within `base^l` of this node's point.
    /// `None` marks leaves and groups of exact duplicates, which sit below
    /// every finite level.
    pub fn scale(&self) -> Option<i32> {
        self.scale
    }

    /// Child node ids; the first child always carries this node's own point.
    pub fn children(&self) -> &[usize] {
        &self.children
    }

    pub fn furthest_descendant_distance(&self) -> f64 {
        self.furthest_descendant_distance
    }
}

/// Metric-only hierarchical index.
///
/// Built by batch construction in dataset order: a node at level `l` keeps
/// the candidates within `base^(l-1)` of its point for its self-child, then
/// repeatedly promotes the lowest-indexed remaining candidate to a new
/// child, which claims every remaining candidate within `base^(l-1)` of it.
/// Empty levels are skipped, so a child may sit more than one level below
/// its parent. Every dataset point ends up in exactly one leaf.
#[derive(Debug, Clone)]
pub struct CoverTree<'a, M> {
    data: &'a DataMatrix,
    metric: M,
    base: f64,
    nodes: Vec<CoverNode>,
    points_by_node: Vec<usize>,
}

impl<'a, M: Metric> CoverTree<'a, M> {
    pub fn new(data: &'a DataMatrix, metric: M, base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) {
            return Err(Error::invalid(format!("cover tree base must exceed 1, got {base}")));
        }
        let mut tree = CoverTree {
            data,
            metric,
            base,
            nodes: Vec::with_capacity(2 * data.len()),
            points_by_node: Vec::new(),
        };
        let root_point = data.point(0);
        let candidates = (1..data.len())
            .map(|i| (i, tree.metric.distance(root_point, data.point(i))))
            .collect();
        tree.build(0, candidates);
        tree.points_by_node = tree.nodes.iter().map(|n| n.point).collect();
        tree.fill_descendant_distances(0);
        Ok(tree)
    }

    fn push(&mut self, point: usize, scale: Option<i32>) -> usize {
        self.nodes.push(CoverNode {
            point,
            scale,
            children: Vec::new(),
            furthest_descendant_distance: 0.0,
        });
        self.nodes.len() - 1
    }

    /// `candidates` are `(index, distance to point)` in ascending index order.
    fn build(&mut self, point: usize, candidates: Vec<(usize, f64)>) -> usize {
        if candidates.is_empty() {
            return self.push(point, None);
        }
        let max_dist = candidates.iter().fold(0.0f64, |m, c| m.max(c.1));
        if max_dist == 0.0 {
            let id = self.push(point, None);
            let mut children = vec![self.push(point, None)];
            children.extend(candidates.iter().map(|&(i, _)| self.push(i, None)));
            self.nodes[id].children = children;
            return id;
        }

        let scale = self.scale_for(max_dist);
        let child_radius = self.base.powi(scale - 1);
        let id = self.push(point, Some(scale));

        let (near, mut rest): (Vec<_>, Vec<_>) =
            candidates.into_iter().partition(|c| c.1 <= child_radius);
        let mut children = vec![self.build(point, near)];

        while !rest.is_empty() {
            let (child_point, _) = rest.remove(0);
            let centre = self.data.point(child_point);
            let mut claimed = Vec::new();
            rest.retain(|&(i, _)| {
                let to_child = self.metric.distance(centre, self.data.point(i));
                if to_child <= child_radius {
                    claimed.push((i, to_child));
                }
                to_child > child_radius
            });
            children.push(self.build(child_point, claimed));
        }
        self.nodes[id].children = children;
        id
    }

    /// Smallest `l` with `base^l >= dist`.
    fn scale_for(&self, dist: f64) -> i32 {
        let mut scale = (dist.ln() / self.base.ln()).ceil() as i32;
        while self.base.powi(scale) < dist {
            scale += 1;
        }
        while self.base.powi(scale - 1) >= dist {
            scale -= 1;
        }
        scale
    }

    /// Exact furthest-descendant distances, bottom up. Returns the leaf
    /// points under `node`.
    fn fill_descendant_distances(&mut self, node: usize) -> Vec<usize> {
        let children = self.nodes[node].children.clone();
        if children.is_empty() {
            return vec![self.nodes[node].point];
        }
        let mut points = Vec::new();
        for c in children {
            points.extend(self.fill_descendant_distances(c));
        }
        let centre = self.data.point(self.nodes[node].point);
        self.nodes[node].furthest_descendant_distance = points
            .iter()
            .map(|&p| self.metric.distance(centre, self.data.point(p)))
            .fold(0.0, f64::max);
        points
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn nodes(&self) -> &[CoverNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &CoverNode {
        &self.nodes[id]
    }

    /// Distance from `q` to the node's point, less its furthest-descendant
    /// distance, floored at zero.
    pub fn node_min_distance(&self, node: usize, q: &[f64]) -> Result<f64> {
        if q.len() != self.data.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.data.dim(),
                found: q.len(),
            });
        }
        Ok(self.min_distance_to_point(node, q))
    }

    #[inline]
    fn centre(&self, node: usize) -> &[f64] {
        self.data.point(self.nodes[node].point)
    }
}

#[inline]
fn widened_lower(dist: f64, radius: f64) -> f64 {
    if radius == 0.0 {
        dist
    } else {
        (dist - radius - BOUND_SLACK * (dist + radius)).max(0.0)
    }
}

#[inline]
fn widened_upper(dist: f64, radius: f64) -> f64 {
    if radius == 0.0 {
        dist
    } else {
        dist + radius + BOUND_SLACK * (dist + radius)
    }
}

impl<'a, M: Metric> SpaceTree<'a> for CoverTree<'a, M> {
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
        &self.nodes[node].children
    }

    fn node_points(&self, node: usize) -> &[usize] {
        if self.nodes[node].children.is_empty() {
            std::slice::from_ref(&self.points_by_node[node])
        } else {
            &[]
        }
    }

    fn node_coords(&self, node: usize) -> &[f64] {
        if self.nodes[node].children.is_empty() {
            self.data.point(self.points_by_node[node])
        } else {
            &[]
        }
    }

    fn descendants(&self, node: usize, out: &mut Vec<usize>) {
        let n = &self.nodes[node];
        if n.children.is_empty() {
            out.push(n.point);
        }
        for &c in &n.children {
            self.descendants(c, out);
        }
    }

    #[inline]
    fn min_distance_to_point(&self, node: usize, q: &[f64]) -> f64 {
        let d = self.metric.distance(q, self.centre(node));
        widened_lower(d, self.nodes[node].furthest_descendant_distance)
    }

    #[inline]
    fn max_distance_to_point(&self, node: usize, q: &[f64]) -> f64 {
        let d = self.metric.distance(q, self.centre(node));
        widened_upper(d, self.nodes[node].furthest_descendant_distance)
    }

    #[inline]
    fn min_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64 {
        let d = self.metric.distance(self.centre(node), other.centre(other_node));
        let radius = self.nodes[node].furthest_descendant_distance
            + other.nodes[other_node].furthest_descendant_distance;
        widened_lower(d, radius)
    }

    #[inline]
    fn max_distance_to_node(&self, node: usize, other: &Self, other_node: usize) -> f64 {
        let d = self.metric.distance(self.centre(node), other.centre(other_node));
        let radius = self.nodes[node].furthest_descendant_distance
            + other.nodes[other_node].furthest_descendant_distance;
        widened_upper(d, radius)
    }

    fn node_radius(&self, node: usize) -> f64 {
        self.nodes[node].furthest_descendant_distance
    }

    fn build_sibling(&self, data: &'a DataMatrix) -> Result<Self> {
        CoverTree::new(data, self.metric.clone(), self.base)
    }
}
