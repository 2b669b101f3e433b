use std::fmt::Debug;
use std::str::FromStr;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::rng::SeededRng;

/// Chooses the `k x d` starting centroids.
pub trait Initialization: Clone + Debug {
    fn initial_centroids<M: Metric>(
        &self,
        data: &DataMatrix,
        k: usize,
        metric: &M,
        rng: &mut SeededRng,
    ) -> Result<DataMatrix>;
}

/// Assigns every point to a uniformly random cluster and takes the member
/// means. Empty clusters steal a random point from a cluster that can spare
/// one until all `k` are populated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RandomPartition;

/// k-means++: the first centroid is a uniform pick, each further centroid is
/// a point drawn with probability proportional to its squared distance to
/// the nearest centroid chosen so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KMeansPlusPlusInitialization;

pub(crate) fn check_k(data: &DataMatrix, k: usize) -> Result<()> {
    if k == 0 || k > data.len() {
        return Err(Error::invalid(format!(
            "cluster count {k} is outside 1..={}",
            data.len()
        )));
    }
    Ok(())
}

/// Member means in point order. Clusters without members get `fallback`'s row.
pub(crate) fn member_means(
    data: &DataMatrix,
    assignments: &[usize],
    k: usize,
    fallback: Option<&DataMatrix>,
) -> (Vec<f64>, Vec<usize>) {
    let d = data.dim();
    let mut sums = vec![0.0; k * d];
    let mut counts = vec![0usize; k];
    for (p, &c) in data.points().zip(assignments) {
        counts[c] += 1;
        for (s, x) in sums[c * d..(c + 1) * d].iter_mut().zip(p) {
            *s += x;
        }
    }
    for c in 0..k {
        let row = &mut sums[c * d..(c + 1) * d];
        if counts[c] > 0 {
            let n = counts[c] as f64;
            row.iter_mut().for_each(|s| *s /= n);
        } else if let Some(f) = fallback {
            row.copy_from_slice(f.point(c));
        }
    }
    (sums, counts)
}

impl Initialization for RandomPartition {
    fn initial_centroids<M: Metric>(
        &self,
        data: &DataMatrix,
        k: usize,
        _metric: &M,
        rng: &mut SeededRng,
    ) -> Result<DataMatrix> {
        check_k(data, k)?;
        let mut assignments: Vec<usize> = (0..data.len()).map(|_| rng.below(k)).collect();
        let mut counts = vec![0usize; k];
        for &c in &assignments {
            counts[c] += 1;
        }
        while let Some(empty) = counts.iter().position(|&c| c == 0) {
            let donors: Vec<usize> = (0..data.len()).filter(|&i| counts[assignments[i]] > 1).collect();
            let i = donors[rng.below(donors.len())];
            counts[assignments[i]] -= 1;
            assignments[i] = empty;
            counts[empty] += 1;
        }
        let (means, _) = member_means(data, &assignments, k, None);
        DataMatrix::from_flat(k, data.dim(), means)
    }
}

impl Initialization for KMeansPlusPlusInitialization {
    fn initial_centroids<M: Metric>(
        &self,
        data: &DataMatrix,
        k: usize,
        metric: &M,
        rng: &mut SeededRng,
    ) -> Result<DataMatrix> {
        check_k(data, k)?;
        let chosen = kmeanspp_indices(data, k, metric, rng);
        data.select(&chosen)
    }
}

/// Indices picked by k-means++. When fewer than `k` distinct points exist the
/// remaining picks are uniform among points not chosen yet.
pub fn kmeanspp_indices<M: Metric>(data: &DataMatrix, k: usize, metric: &M, rng: &mut SeededRng) -> Vec<usize> {
    let n = data.len();
    let first = rng.below(n);
    let mut chosen = vec![first];
    let mut weight: Vec<f64> = data
        .points()
        .map(|p| {
            let d = metric.distance(p, data.point(first));
            d * d
        })
        .collect();
    while chosen.len() < k {
        let total: f64 = weight.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in weight.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total weight")
        } else {
            let rest: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            rest[rng.below(rest.len())]
        };
        chosen.push(pick);
        let centre = data.point(pick);
        for (w, p) in weight.iter_mut().zip(data.points()) {
            let d = metric.distance(p, centre);
            *w = w.min(d * d);
        }
    }
    chosen
}

/// Initialization chosen at run time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InitKind {
    #[default]
    RandomPartition,
    KMeansPlusPlus,
}

impl Initialization for InitKind {
    fn initial_centroids<M: Metric>(
        &self,
        data: &DataMatrix,
        k: usize,
        metric: &M,
        rng: &mut SeededRng,
    ) -> Result<DataMatrix> {
        match self {
            InitKind::RandomPartition => RandomPartition.initial_centroids(data, k, metric, rng),
            InitKind::KMeansPlusPlus => KMeansPlusPlusInitialization.initial_centroids(data, k, metric, rng),
        }
    }
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(InitKind::RandomPartition),
            "kmeanspp" => Ok(InitKind::KMeansPlusPlus),
            _ => Err(Error::invalid(format!("unknown initialization {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::EuclideanDistance;

    fn column(values: &[f64]) -> DataMatrix {
        DataMatrix::from_flat(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn single_cluster_is_dataset_mean() {
        let data = column(&[1.0, 2.0, 6.0]);
        let c = RandomPartition
            .initial_centroids(&data, 1, &EuclideanDistance, &mut SeededRng::new(0))
            .unwrap();
        assert_eq!(c.as_slice(), &[3.0]);
    }

    #[test]
    fn k_equals_n_gives_every_point() {
        let data = column(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        for seed in 0..20 {
            let c = RandomPartition
                .initial_centroids(&data, 8, &EuclideanDistance, &mut SeededRng::new(seed))
                .unwrap();
            let mut v = c.as_slice().to_vec();
            v.sort_by(f64::total_cmp);
            assert_eq!(v, data.as_slice());
        }
    }

    #[test]
    fn seeded_initializations_repeat() {
        let data = crate::data::generate_uniform(100, 3, &mut SeededRng::new(1)).unwrap();
        for init in [InitKind::RandomPartition, InitKind::KMeansPlusPlus] {
            let a = init.initial_centroids(&data, 5, &EuclideanDistance, &mut SeededRng::new(3)).unwrap();
            let b = init.initial_centroids(&data, 5, &EuclideanDistance, &mut SeededRng::new(3)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kmeanspp_selects_all_distinct_points() {
        let data = column(&[0.0, 3.0, 7.0, 9.0]);
        for seed in 0..50 {
            let mut idx = kmeanspp_indices(&data, 4, &EuclideanDistance, &mut SeededRng::new(seed));
            idx.sort();
            assert_eq!(idx, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn kmeanspp_never_repeats_a_duplicate() {
        let data = column(&[5.0, 5.0, 5.0, 1.0, 9.0]);
        for seed in 0..200 {
            let idx = kmeanspp_indices(&data, 3, &EuclideanDistance, &mut SeededRng::new(seed));
            let dupes = idx.iter().filter(|&&i| i < 3).count();
            assert_eq!(dupes, 1, "seed {seed}: {idx:?}");
        }
    }

    #[test]
    fn kmeanspp_falls_back_when_points_run_out() {
        let data = column(&[2.0, 2.0, 2.0]);
        let mut idx = kmeanspp_indices(&data, 3, &EuclideanDistance, &mut SeededRng::new(0));
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_bad_k() {
        let data = column(&[1.0, 2.0]);
        let mut rng = SeededRng::new(0);
        assert!(RandomPartition.initial_centroids(&data, 3, &EuclideanDistance, &mut rng).is_err());
        assert!(KMeansPlusPlusInitialization
            .initial_centroids(&data, 0, &EuclideanDistance, &mut rng)
            .is_err());
    }
}
