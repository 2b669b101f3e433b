//! Exact k-nearest/furthest neighbor and range search.
//!
//! Searches run over any [`SpaceTree`] (kd-tree or cover tree) with a
//! single-tree or dual-tree traversal, or exhaustively. All three return
//! identical results: rows are ordered best-first, and equal distances are
//! ordered by ascending reference index.

mod dual;
mod range;
mod single;
mod sort;

pub use range::RangeResult;
pub use sort::{FurthestNeighborSort, NearestNeighborSort, SortPolicy};

use std::fmt;
use std::str::FromStr;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::tree::SpaceTree;
use sort::CandidateLists;

/// Where the query points come from.
#[derive(Debug, Clone, Copy)]
pub enum QuerySet<'q> {
    /// Query set is the reference set; each point is excluded from its own results.
    Reference,
    Points(&'q DataMatrix),
}

impl QuerySet<'_> {
    pub fn is_monochromatic(&self) -> bool {
        matches!(self, QuerySet::Reference)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Traversal {
    SingleTree,
    #[default]
    DualTree,
    Naive,
}

impl FromStr for Traversal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Traversal::SingleTree),
            "dual" => Ok(Traversal::DualTree),
            "naive" => Ok(Traversal::Naive),
            _ => Err(Error::invalid(format!("unknown traversal {s:?}"))),
        }
    }
}

impl fmt::Display for Traversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Traversal::SingleTree => "single",
            Traversal::DualTree => "dual",
            Traversal::Naive => "naive",
        })
    }
}

/// `m x k` neighbor indices and distances, one row per query, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborResult {
    k: usize,
    indices: Vec<usize>,
    distances: Vec<f64>,
}

impl NeighborResult {
    fn from_lists<S: SortPolicy>(lists: CandidateLists<S>, k: usize) -> Self {
        let (indices, distances) = lists.into_parts();
        debug_assert!(indices.iter().all(|&i| i != usize::MAX));
        NeighborResult { k, indices, distances }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of query rows.
    pub fn len(&self) -> usize {
        self.indices.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn neighbors(&self, query: usize) -> &[usize] {
        &self.indices[query * self.k..(query + 1) * self.k]
    }

    pub fn distances_of(&self, query: usize) -> &[f64] {
        &self.distances[query * self.k..(query + 1) * self.k]
    }

    /// Row-major indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Row-major distances.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }
}

fn query_points<'q>(reference: &'q DataMatrix, query: QuerySet<'q>) -> Result<&'q DataMatrix> {
    match query {
        QuerySet::Reference => Ok(reference),
        QuerySet::Points(q) if q.dim() != reference.dim() => Err(Error::DimensionMismatch {
            expected: reference.dim(),
            found: q.dim(),
        }),
        QuerySet::Points(q) => Ok(q),
    }
}

fn check_k(reference: &DataMatrix, query: QuerySet<'_>, k: usize) -> Result<()> {
    let usable = reference.len() - usize::from(query.is_monochromatic());
    if k == 0 || k > usable {
        return Err(Error::invalid(format!(
            "k = {k} is outside 1..={usable} for {} reference points{}",
            reference.len(),
            if query.is_monochromatic() { " (self excluded)" } else { "" }
        )));
    }
    Ok(())
}

/// Exhaustive search; the reference answer every tree search must reproduce.
pub fn brute_force_search<M: Metric, S: SortPolicy>(
    reference: &DataMatrix,
    query: QuerySet<'_>,
    k: usize,
    metric: &M,
) -> Result<NeighborResult> {
    let queries = query_points(reference, query)?;
    check_k(reference, query, k)?;
    let mono = query.is_monochromatic();
    let mut lists = CandidateLists::<S>::new(queries.len(), k);
    for (qi, q) in queries.points().enumerate() {
        for (ri, r) in reference.points().enumerate() {
            if mono && qi == ri {
                continue;
            }
            lists.offer(qi, metric.distance(q, r), ri);
        }
    }
    Ok(NeighborResult::from_lists(lists, k))
}

/// k-nearest (or furthest, per `S`) neighbors of every query point among
/// the points indexed by `tree`.
///
/// `Traversal::DualTree` with an explicit query set builds a query tree of
/// the same kind and parameters first.
pub fn knn_search<'a, T: SpaceTree<'a>, S: SortPolicy>(
    tree: &T,
    query: QuerySet<'a>,
    k: usize,
    traversal: Traversal,
) -> Result<NeighborResult> {
    let reference = tree.data();
    let queries = query_points(reference, query)?;
    check_k(reference, query, k)?;
    let mono = query.is_monochromatic();
    let lists = match traversal {
        Traversal::Naive => return brute_force_search::<_, S>(reference, query, k, tree.metric()),
        Traversal::SingleTree => single::search::<T, S, _>(tree, queries, mono, k, &mut ()),
        Traversal::DualTree => match query {
            QuerySet::Reference => dual::search::<T, S, _>(tree, tree, true, k, &mut ()),
            QuerySet::Points(q) => {
                let qtree = tree.build_sibling(q)?;
                dual::search::<T, S, _>(&qtree, tree, false, k, &mut ())
            }
        },
    };
    Ok(NeighborResult::from_lists(lists, k))
}

/// Convenience wrapper for [`knn_search`] with [`NearestNeighborSort`].
pub fn nearest<'a, T: SpaceTree<'a>>(
    tree: &T,
    query: QuerySet<'a>,
    k: usize,
    traversal: Traversal,
) -> Result<NeighborResult> {
    knn_search::<T, NearestNeighborSort>(tree, query, k, traversal)
}

/// Convenience wrapper for [`knn_search`] with [`FurthestNeighborSort`].
pub fn furthest<'a, T: SpaceTree<'a>>(
    tree: &T,
    query: QuerySet<'a>,
    k: usize,
    traversal: Traversal,
) -> Result<NeighborResult> {
    knn_search::<T, FurthestNeighborSort>(tree, query, k, traversal)
}

fn check_range(low: f64, high: f64) -> Result<()> {
    if low.is_nan() || low < 0.0 || low.is_infinite() || high.is_nan() {
        return Err(Error::invalid(format!("range low must be finite and >= 0, got {low}")));
    }
    if low > high {
        return Err(Error::invalid(format!("range low {low} exceeds high {high}")));
    }
    Ok(())
}

/// Every reference point whose distance to the query lies in `[low, high]`.
pub fn brute_force_range<M: Metric>(
    reference: &DataMatrix,
    query: QuerySet<'_>,
    low: f64,
    high: f64,
    metric: &M,
) -> Result<RangeResult> {
    let queries = query_points(reference, query)?;
    check_range(low, high)?;
    let mono = query.is_monochromatic();
    let lists = queries
        .points()
        .enumerate()
        .map(|(qi, q)| {
            reference
                .points()
                .enumerate()
                .filter(|&(ri, _)| !(mono && ri == qi))
                .map(|(ri, r)| (ri, metric.distance(q, r)))
                .filter(|&(_, d)| low <= d && d <= high)
                .collect()
        })
        .collect();
    Ok(RangeResult::new(lists))
}

/// Tree-accelerated range search. Results match [`brute_force_range`] exactly.
pub fn range_search<'a, T: SpaceTree<'a>>(
    tree: &T,
    query: QuerySet<'a>,
    low: f64,
    high: f64,
    traversal: Traversal,
) -> Result<RangeResult> {
    let reference = tree.data();
    let queries = query_points(reference, query)?;
    check_range(low, high)?;
    let mono = query.is_monochromatic();
    Ok(match traversal {
        Traversal::Naive => return brute_force_range(reference, query, low, high, tree.metric()),
        Traversal::SingleTree => range::single(tree, queries, mono, low, high),
        Traversal::DualTree => match query {
            QuerySet::Reference => range::dual(tree, tree, true, low, high),
            QuerySet::Points(q) => {
                let qtree = tree.build_sibling(q)?;
                range::dual(&qtree, tree, false, low, high)
            }
        },
    })
}

/// Hooks called whenever a traversal discards part of a tree. Only used by
/// tests that verify pruning never discards a true result.
pub(crate) trait PruneObserver {
    fn pruned_point(&mut self, _query: usize, _node: usize) {}
    fn pruned_pair(&mut self, _query_node: usize, _reference_node: usize) {}
}

impl PruneObserver for () {}

#[cfg(test)]
mod tests;
