//! Exact tree-based neighbor search, range search and k-means clustering.
//!
//! The crate is organised around a few policy points that can be swapped
//! without touching the algorithms:
//!
//! - [`metric::Metric`]: point-to-point distance (Euclidean, Manhattan, any Lp).
//! - [`tree::SpaceTree`]: the index a search runs over ([`tree::KdTree`] or
//!   [`tree::CoverTree`]).
//! - [`neighbor::SortPolicy`]: nearest or furthest neighbors.
//! - [`kmeans`] initialization and empty-cluster policies.
//!
//! ```
//! use mlcore::prelude::*;
//!
//! let data = generate_uniform(500, 3, &mut SeededRng::new(1)).unwrap();
//! let tree = KdTree::new(&data, EuclideanDistance, DEFAULT_LEAF_SIZE).unwrap();
//! let knn = nearest(&tree, QuerySet::Reference, 3, Traversal::DualTree).unwrap();
//! assert_eq!(knn.len(), 500);
//!
//! let clusters = KMeans::new(4).cluster(&data).unwrap();
//! assert_eq!(clusters.assignments.len(), 500);
//! ```

pub mod bench;
pub mod cli;
pub mod data;
pub mod error;
pub mod kmeans;
pub mod metric;
pub mod neighbor;
pub mod rng;
pub mod tree;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::data::{generate_uniform, load_csv, save_csv, DataMatrix};
    pub use crate::error::{Error, Result};
    pub use crate::kmeans::{
        AllowEmptyClusters, ClusteringResult, KMeans, KMeansPlusPlusInitialization,
        RandomPartition, ReseedFurthest,
    };
    pub use crate::metric::{EuclideanDistance, LpDistance, ManhattanDistance, Metric, MetricKind};
    pub use crate::neighbor::{
        furthest, knn_search, nearest, range_search, FurthestNeighborSort, NearestNeighborSort,
        NeighborResult, QuerySet, RangeResult, Traversal,
    };
    pub use crate::rng::SeededRng;
    pub use crate::tree::{CoverTree, KdTree, SpaceTree, DEFAULT_BASE, DEFAULT_LEAF_SIZE};
}
