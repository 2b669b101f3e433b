//! Timing harness for k-NN and k-means runs.
//!
//! Each manifest entry is loaded once (not timed), then run `trials` times
//! back to back. k-NN trials time index construction and the all-points
//! query separately; k-means trials time the whole clustering from one
//! fixed set of starting centroids chosen before the first trial.

mod manifest;
mod report;

pub use manifest::{
    BenchEntry, BenchManifest, BenchTask, DataSource, KMeansVariant, KnnVariant, TreeKind, DEFAULT_TRIALS,
};
pub use report::{emit_report, parse_csv_report, BenchReport, BenchRow, ReportFormat, RowStatus};

use std::time::Instant;

use crate::data::{generate_uniform, load_csv, DataMatrix};
use crate::error::{Error, Result};
use crate::kmeans::KMeans;
use crate::metric::{EuclideanDistance, ManhattanDistance, Metric, MetricKind};
use crate::neighbor::{nearest, NeighborResult, QuerySet, Traversal};
use crate::rng::SeededRng;
use crate::tree::{CoverTree, KdTree, SpaceTree};

/// Loads CSV files (no header) and generates `gen:` sources.
pub fn default_loader(source: &DataSource) -> Result<DataMatrix> {
    match source {
        DataSource::File(path) => load_csv(path, false),
        DataSource::Generated { rows, cols, seed } => generate_uniform(*rows, *cols, &mut SeededRng::new(*seed)),
    }
}

pub fn run_bench(manifest: &BenchManifest) -> BenchReport {
    run_bench_with(manifest, default_loader)
}

/// Like [`run_bench`] with a caller-supplied loader. Entries whose data
/// cannot be loaded, or whose task fails, are reported as failed rows.
pub fn run_bench_with<L>(manifest: &BenchManifest, mut loader: L) -> BenchReport
where
    L: FnMut(&DataSource) -> Result<DataMatrix>,
{
    let rows = manifest
        .entries
        .iter()
        .map(|entry| {
            let outcome = loader(&entry.source).and_then(|data| run_entry(entry, &data, manifest));
            outcome.unwrap_or_else(|e| {
                BenchRow::failed(&entry.name, entry.task.name(), &entry.label, entry.k, e.to_string())
            })
        })
        .collect();
    BenchReport { rows }
}

fn run_entry(entry: &BenchEntry, data: &DataMatrix, manifest: &BenchManifest) -> Result<BenchRow> {
    if manifest.trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    let mut row = BenchRow {
        dataset: entry.name.clone(),
        task: entry.task.name().to_string(),
        variant: entry.label.clone(),
        k: entry.k,
        status: RowStatus::Ok,
        build_seconds: Vec::new(),
        run_seconds: Vec::new(),
        iterations: None,
    };
    match &entry.task {
        BenchTask::Knn(v) => {
            let trial = || -> Result<(f64, f64)> {
                match v.metric {
                    MetricKind::Euclidean => knn_trial(data, entry.k, v, EuclideanDistance),
                    MetricKind::Manhattan => knn_trial(data, entry.k, v, ManhattanDistance),
                    MetricKind::Lp(m) => knn_trial(data, entry.k, v, m),
                }
            };
            if manifest.warmup {
                trial()?;
            }
            for _ in 0..manifest.trials {
                let (build, query) = trial()?;
                row.build_seconds.push(build);
                row.run_seconds.push(query);
            }
        }
        BenchTask::KMeans(v) => {
            let model = KMeans::with_policies(entry.k, v.metric, v.init, v.empty)
                .max_iterations(v.max_iterations)
                .seed(v.seed);
            let start = model.initial_centroids(data)?;
            let trial = || -> Result<(f64, usize)> {
                let t = Instant::now();
                let res = model.cluster_from(data, &start)?;
                Ok((t.elapsed().as_secs_f64(), res.iterations))
            };
            if manifest.warmup {
                trial()?;
            }
            for _ in 0..manifest.trials {
                let (secs, iterations) = trial()?;
                row.run_seconds.push(secs);
                row.iterations = Some(iterations);
            }
        }
    }
    Ok(row)
}

fn timed_query<'a, T: SpaceTree<'a>>(tree: &T, k: usize, traversal: Traversal) -> Result<(NeighborResult, f64)> {
    let t = Instant::now();
    let res = nearest(tree, QuerySet::Reference, k, traversal)?;
    Ok((res, t.elapsed().as_secs_f64()))
}

/// One monochromatic k-NN run: `(build seconds, query seconds)`.
fn knn_trial<M: Metric>(data: &DataMatrix, k: usize, v: &KnnVariant, metric: M) -> Result<(f64, f64)> {
    let t = Instant::now();
    let (result, build, query) = match v.tree {
        TreeKind::Kd => {
            let tree = KdTree::new(data, metric, v.leaf_size)?;
            let build = t.elapsed().as_secs_f64();
            let (res, q) = timed_query(&tree, k, v.traversal)?;
            (res, build, q)
        }
        TreeKind::Cover => {
            let tree = CoverTree::new(data, metric, v.base)?;
            let build = t.elapsed().as_secs_f64();
            let (res, q) = timed_query(&tree, k, v.traversal)?;
            (res, build, q)
        }
    };
    std::hint::black_box(result);
    Ok((build, query))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;
    use std::time::Duration;

    fn manifest(text: &str) -> BenchManifest {
        BenchManifest::parse(text, Path::new(".")).unwrap()
    }

    #[test]
    fn five_trials_per_entry() {
        let m = manifest(
            "small, knn, gen:300x3:1, 3\nclusters, kmeans, gen:300x3:2, 4, init=kmeanspp\n",
        );
        let report = run_bench(&m);
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.status, RowStatus::Ok);
            assert_eq!(row.run_seconds.len(), 5);
        }
        assert_eq!(report.rows[0].build_seconds.len(), 5);
        assert!(report.rows[1].build_seconds.is_empty());
        assert!(report.rows[1].iterations.is_some());
    }

    #[test]
    fn missing_dataset_does_not_stop_the_run() {
        let m = manifest("gone, knn, /definitely/not/here.csv, 3\nok, knn, gen:50x2:1, 3\n");
        let report = run_bench(&m);
        assert!(matches!(report.rows[0].status, RowStatus::Failed(_)));
        assert_eq!(report.rows[1].status, RowStatus::Ok);
        assert_eq!(report.failures().count(), 1);
    }

    #[test]
    fn warmup_is_not_recorded() {
        let mut m = manifest("w, knn, gen:100x2:1, 2, traversal=single\n");
        m.warmup = true;
        m.trials = 2;
        let report = run_bench(&m);
        assert_eq!(report.rows[0].run_seconds.len(), 2);
    }

    #[test]
    fn loader_time_is_excluded() {
        let m = manifest("slow, knn, gen:200x2:1, 3\n");
        let pause = Duration::from_millis(400);
        let report = run_bench_with(&m, |src| {
            std::thread::sleep(pause);
            default_loader(src)
        });
        let row = &report.rows[0];
        for (b, q) in row.build_seconds.iter().zip(&row.run_seconds) {
            assert!(b + q < pause.as_secs_f64());
        }
    }
}
