use std::fmt::Debug;
use std::str::FromStr;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::Metric;

/// What a Lloyd update does with a cluster that received no points.
pub trait EmptyClusterPolicy: Clone + Debug {
    /// Called after the update when at least one count is zero. `centroids`
    /// is row-major `k x d`; empty rows still hold the previous centroid.
    /// Returns true if any centroid or assignment changed.
    fn fix_empty<M: Metric>(
        &self,
        data: &DataMatrix,
        metric: &M,
        assignments: &mut [usize],
        centroids: &mut [f64],
        counts: &mut [usize],
    ) -> bool;
}

/// Empty clusters keep their previous centroid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AllowEmptyClusters;

/// Each empty cluster takes over the point furthest from its centroid in the
/// cluster with the largest variance (mean squared distance to centroid).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReseedFurthest;

impl EmptyClusterPolicy for AllowEmptyClusters {
    fn fix_empty<M: Metric>(
        &self,
        _data: &DataMatrix,
        _metric: &M,
        _assignments: &mut [usize],
        _centroids: &mut [f64],
        _counts: &mut [usize],
    ) -> bool {
        false
    }
}

impl EmptyClusterPolicy for ReseedFurthest {
    fn fix_empty<M: Metric>(
        &self,
        data: &DataMatrix,
        metric: &M,
        assignments: &mut [usize],
        centroids: &mut [f64],
        counts: &mut [usize],
    ) -> bool {
        let d = data.dim();
        let k = counts.len();
        let mut changed = false;
        while let Some(empty) = counts.iter().position(|&c| c == 0) {
            let mut spread = vec![0.0; k];
            for (p, &c) in data.points().zip(assignments.iter()) {
                let dist = metric.distance(p, &centroids[c * d..(c + 1) * d]);
                spread[c] += dist * dist;
            }
            let donor = (0..k)
                .filter(|&c| counts[c] > 1)
                .map(|c| (c, spread[c] / counts[c] as f64))
                .fold(None::<(usize, f64)>, |best, cur| match best {
                    Some(b) if b.1 >= cur.1 => Some(b),
                    _ => Some(cur),
                });
            let Some((donor, _)) = donor else {
                // k > n; nothing left to hand out
                break;
            };
            let centre = centroids[donor * d..(donor + 1) * d].to_vec();
            let (moved_point, _) = (0..data.len())
                .filter(|&i| assignments[i] == donor)
                .map(|i| (i, metric.distance(data.point(i), &centre)))
                .fold((usize::MAX, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });

            assignments[moved_point] = empty;
            counts[donor] -= 1;
            counts[empty] = 1;
            centroids[empty * d..(empty + 1) * d].copy_from_slice(data.point(moved_point));

            let row = &mut centroids[donor * d..(donor + 1) * d];
            row.iter_mut().for_each(|v| *v = 0.0);
            for (p, _) in data.points().zip(assignments.iter()).filter(|(_, &c)| c == donor) {
                for (v, x) in row.iter_mut().zip(p) {
                    *v += x;
                }
            }
            let n = counts[donor] as f64;
            row.iter_mut().for_each(|v| *v /= n);
            changed = true;
        }
        changed
    }
}

/// Empty-cluster policy chosen at run time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EmptyKind {
    Allow,
    #[default]
    Reseed,
}

impl EmptyClusterPolicy for EmptyKind {
    fn fix_empty<M: Metric>(
        &self,
        data: &DataMatrix,
        metric: &M,
        assignments: &mut [usize],
        centroids: &mut [f64],
        counts: &mut [usize],
    ) -> bool {
        match self {
            EmptyKind::Allow => AllowEmptyClusters.fix_empty(data, metric, assignments, centroids, counts),
            EmptyKind::Reseed => ReseedFurthest.fix_empty(data, metric, assignments, centroids, counts),
        }
    }
}

impl FromStr for EmptyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allow" => Ok(EmptyKind::Allow),
            "reseed" => Ok(EmptyKind::Reseed),
            _ => Err(Error::invalid(format!("unknown empty-cluster policy {s:?}"))),
        }
    }
}
