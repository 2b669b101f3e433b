//! Lloyd's k-means with pluggable policies.
//!
//! [`KMeans`] is generic over three policies: the [`Metric`] used for
//! assignment, the [`Initialization`] that picks starting centroids, and
//! the [`EmptyClusterPolicy`] applied when a cluster loses all its points.
//! `KMeans::new(k)` is plain Euclidean k-means; swapping policies is a
//! type change, not a code change:
//!
//! ```
//! use mlcore::prelude::*;
//!
//! let data = generate_uniform(200, 2, &mut SeededRng::new(3)).unwrap();
//! let standard = KMeans::new(3).cluster(&data).unwrap();
//!
//! let custom = KMeans::with_policies(
//!     3,
//!     ManhattanDistance,
//!     KMeansPlusPlusInitialization,
//!     AllowEmptyClusters,
//! )
//! .cluster(&data)
//! .unwrap();
//! assert_eq!(standard.centroids.len(), custom.centroids.len());
//! ```
//!
//! Centroids are always member means, whatever the metric, and the
//! objective is the sum of squared metric distances. Under a non-Euclidean
//! metric the objective is therefore not guaranteed to decrease.

mod empty;
mod init;

pub use empty::{AllowEmptyClusters, EmptyClusterPolicy, EmptyKind, ReseedFurthest};
pub use init::{kmeanspp_indices, InitKind, Initialization, KMeansPlusPlusInitialization, RandomPartition};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::{EuclideanDistance, Metric};
use crate::rng::SeededRng;

pub const DEFAULT_MAX_ITERATIONS: usize = 1000;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct KMeans<M = EuclideanDistance, I = RandomPartition, E = ReseedFurthest> {
    k: usize,
    max_iterations: usize,
    tolerance: f64,
    seed: u64,
    metric: M,
    init: I,
    empty: E,
}

/// Outcome of one Lloyd iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydStep {
    pub assignments: Vec<usize>,
    pub centroids: DataMatrix,
    /// Sum of squared distances from each point to the centroid it was
    /// assigned to, measured against the centroids that went in.
    pub objective: f64,
    /// Sum over clusters of the distance each centroid moved.
    pub moved: f64,
    /// The empty-cluster policy changed something this iteration.
    pub reseeded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub objective: f64,
    pub moved: f64,
    pub reseeded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub centroids: DataMatrix,
    pub assignments: Vec<usize>,
    /// Sum of squared distances from each point to its assigned centroid.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<IterationRecord>,
}

impl KMeans {
    /// Euclidean k-means, random-partition start, empty clusters reseeded.
    pub fn new(k: usize) -> Self {
        KMeans::with_policies(k, EuclideanDistance, RandomPartition, ReseedFurthest)
    }
}

impl<M: Metric, I: Initialization, E: EmptyClusterPolicy> KMeans<M, I, E> {
    pub fn with_policies(k: usize, metric: M, init: I, empty: E) -> Self {
        KMeans {
            k,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            metric,
            init,
            empty,
        }
    }

    pub fn max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// Stop once the summed centroid displacement of an iteration is at most this.
    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn metric<M2: Metric>(self, metric: M2) -> KMeans<M2, I, E> {
        KMeans {
            k: self.k,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.seed,
            metric,
            init: self.init,
            empty: self.empty,
        }
    }

    pub fn initialization<I2: Initialization>(self, init: I2) -> KMeans<M, I2, E> {
        KMeans {
            k: self.k,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.seed,
            metric: self.metric,
            init,
            empty: self.empty,
        }
    }

    pub fn empty_clusters<E2: EmptyClusterPolicy>(self, empty: E2) -> KMeans<M, I, E2> {
        KMeans {
            k: self.k,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            seed: self.seed,
            metric: self.metric,
            init: self.init,
            empty,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn validate(&self, data: &DataMatrix) -> Result<()> {
        init::check_k(data, self.k)?;
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::invalid(format!("tolerance must be >= 0, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// Starting centroids from the configured initialization and seed.
    pub fn initial_centroids(&self, data: &DataMatrix) -> Result<DataMatrix> {
        self.validate(data)?;
        let mut rng = SeededRng::new(self.seed);
        self.init.initial_centroids(data, self.k, &self.metric, &mut rng)
    }

    pub fn cluster(&self, data: &DataMatrix) -> Result<ClusteringResult> {
        let initial = self.initial_centroids(data)?;
        self.cluster_from(data, &initial)
    }

    /// Runs from the given `k x d` centroids; the initialization policy and
    /// seed are not consulted.
    pub fn cluster_from(&self, data: &DataMatrix, initial: &DataMatrix) -> Result<ClusteringResult> {
        self.validate(data)?;
        if initial.len() != self.k || initial.dim() != data.dim() {
            return Err(Error::invalid(format!(
                "initial centroids are {}x{}, expected {}x{}",
                initial.len(),
                initial.dim(),
                self.k,
                data.dim()
            )));
        }

        let mut centroids = initial.clone();
        let mut assignments: Option<Vec<usize>> = None;
        let mut trace = Vec::new();
        let mut converged = false;
        for _ in 0..self.max_iterations {
            let step = lloyd_step(data, &centroids, &self.metric, &self.empty);
            trace.push(IterationRecord {
                objective: step.objective,
                moved: step.moved,
                reseeded: step.reseeded,
            });
            let unchanged = assignments.as_ref() == Some(&step.assignments);
            centroids = step.centroids;
            assignments = Some(step.assignments);
            if step.moved <= self.tolerance || unchanged {
                converged = true;
                break;
            }
        }

        let assignments = assignments.expect("at least one iteration");
        let objective = objective(data, &centroids, &assignments, &self.metric);
        Ok(ClusteringResult {
            centroids,
            assignments,
            objective,
            iterations: trace.len(),
            converged,
            trace,
        })
    }
}

/// Sum of squared distances from each point to its assigned centroid.
pub fn objective<M: Metric>(data: &DataMatrix, centroids: &DataMatrix, assignments: &[usize], metric: &M) -> f64 {
    data.points()
        .zip(assignments)
        .map(|(p, &c)| {
            let d = metric.distance(p, centroids.point(c));
            d * d
        })
        .sum()
}

/// One assignment + update round. Points go to their nearest centroid (the
/// lowest index on ties); non-empty clusters move to their member mean;
/// empty clusters are handled by `empty`.
pub fn lloyd_step<M: Metric, E: EmptyClusterPolicy>(
    data: &DataMatrix,
    centroids: &DataMatrix,
    metric: &M,
    empty: &E,
) -> LloydStep {
    let k = centroids.len();
    let mut total = 0.0;
    let mut assignments: Vec<usize> = data
        .points()
        .map(|p| {
            let (best, dist) = centroids
                .points()
                .map(|c| metric.distance(p, c))
                .enumerate()
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            total += dist * dist;
            best
        })
        .collect();

    let (mut means, mut counts) = init::member_means(data, &assignments, k, Some(centroids));
    let reseeded = counts.contains(&0)
        && empty.fix_empty(data, metric, &mut assignments, &mut means, &mut counts);
    let new_centroids = DataMatrix::from_flat(k, data.dim(), means).expect("centroids stay finite");
    let moved = centroids
        .points()
        .zip(new_centroids.points())
        .map(|(a, b)| metric.distance(a, b))
        .sum();
    LloydStep {
        assignments,
        centroids: new_centroids,
        objective: total,
        moved,
        reseeded,
    }
}
