//! Command-line front end: one binary, one subcommand per method.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad or unknown flags,
//! out-of-range parameters), 2 for data errors (missing or malformed files).
//! Results go to files or standard output; progress notes go to standard
//! error. All point indices in output files are 0-based.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{emit_report, run_bench, BenchManifest, ReportFormat, TreeKind};
use crate::data::{generate_uniform, load_csv, save_csv, save_index_csv, write_csv, DataMatrix};
use crate::error::{Error, Result};
use crate::kmeans::{EmptyKind, InitKind, KMeans, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use crate::metric::MetricKind;
use crate::neighbor::{
    knn_search, range_search, FurthestNeighborSort, NearestNeighborSort, NeighborResult, QuerySet, RangeResult,
    SortPolicy, Traversal,
};
use crate::rng::SeededRng;
use crate::tree::{CoverTree, KdTree, SpaceTree, DEFAULT_BASE, DEFAULT_LEAF_SIZE};

#[derive(Debug, Parser)]
#[command(name = "mlcore", version, about = "Exact neighbor search, range search and k-means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// k-nearest neighbors of every query point.
    Knn(NeighborArgs),
    /// k-furthest neighbors of every query point.
    Fnn(NeighborArgs),
    /// All reference points within a distance band of every query point.
    Range(RangeArgs),
    /// Lloyd's k-means clustering.
    Kmeans(KMeansArgs),
    /// Uniform random dataset on [0, 1).
    Gen(GenArgs),
    /// Timed runs over a benchmark manifest.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Reference dataset, one point per row.
    #[arg(long)]
    pub reference: PathBuf,
    /// Query dataset; when absent the reference set queries itself and each
    /// point is excluded from its own results.
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Skip the first row of every input CSV.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Index type: kd or cover.
    #[arg(long, default_value = "kd", value_parser = parse_with::<TreeKind>)]
    pub tree: TreeKind,
    /// single, dual or naive (exhaustive).
    #[arg(long, default_value = "dual", value_parser = parse_with::<Traversal>)]
    pub traversal: Traversal,
    /// Distance: l1 or l2 (or lp:P).
    #[arg(long, default_value = "l2", value_parser = parse_with::<MetricKind>)]
    pub metric: MetricKind,
    /// Maximum points per kd-tree leaf.
    #[arg(long, default_value_t = DEFAULT_LEAF_SIZE)]
    pub leaf_size: usize,
    /// Cover tree expansion base (> 1).
    #[arg(long, default_value_t = DEFAULT_BASE)]
    pub base: f64,
}

#[derive(Debug, Args)]
pub struct NeighborArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of neighbors per query.
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub tree: TreeArgs,
    /// Neighbor indices (m rows x k columns); standard output when absent.
    #[arg(long)]
    pub neighbors_out: Option<PathBuf>,
    /// Neighbor distances, co-indexed with the neighbors file.
    #[arg(long)]
    pub distances_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub low: f64,
    #[arg(long)]
    pub high: f64,
    #[command(flatten)]
    pub tree: TreeArgs,
    /// One line per query of `index:distance` pairs; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KMeansArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub clusters: usize,
    /// k x d starting centroids; overrides --init.
    #[arg(long)]
    pub initial_centroids: Option<PathBuf>,
    /// random or kmeanspp.
    #[arg(long, default_value = "random", value_parser = parse_with::<InitKind>)]
    pub init: InitKind,
    /// Empty-cluster policy: allow or reseed.
    #[arg(long, default_value = "reseed", value_parser = parse_with::<EmptyKind>)]
    pub empty: EmptyKind,
    #[arg(long, default_value = "l2", value_parser = parse_with::<MetricKind>)]
    pub metric: MetricKind,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub header: bool,
    #[arg(long)]
    pub centroids_out: Option<PathBuf>,
    #[arg(long)]
    pub assignments_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = crate::bench::DEFAULT_TRIALS)]
    pub trials: usize,
    /// markdown or csv.
    #[arg(long, default_value = "markdown", value_parser = parse_with::<ReportFormat>)]
    pub format: ReportFormat,
    /// Run one untimed trial per entry first.
    #[arg(long)]
    pub warmup: bool,
}

fn parse_with<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Knn(a) => neighbors::<NearestNeighborSort>(a),
        Command::Fnn(a) => neighbors::<FurthestNeighborSort>(a),
        Command::Range(a) => range(a),
        Command::Kmeans(a) => kmeans(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
    }
}

fn load_inputs(input: &InputArgs) -> Result<(DataMatrix, Option<DataMatrix>)> {
    let reference = load_csv(&input.reference, input.header)?;
    let query = input.query.as_ref().map(|q| load_csv(q, input.header)).transpose()?;
    Ok((reference, query))
}

fn stdout_or_file(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let io_err = |source| Error::Io {
                path: p.to_path_buf(),
                source,
            };
            let mut f = std::io::BufWriter::new(std::fs::File::create(p).map_err(io_err)?);
            body(&mut f).map_err(io_err)
        }
        None => body(&mut std::io::stdout().lock()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn neighbors<S: SortPolicy>(a: NeighborArgs) -> Result<()> {
    let (reference, query) = load_inputs(&a.input)?;
    let qs = query.as_ref().map_or(QuerySet::Reference, QuerySet::Points);
    let t = &a.tree;
    let start = Instant::now();
    let result: NeighborResult = match t.tree {
        TreeKind::Kd => {
            let tree = KdTree::new(&reference, t.metric, t.leaf_size)?;
            eprintln!("built kd tree ({} nodes) in {:.4}s", tree.node_count(), start.elapsed().as_secs_f64());
            knn_search::<_, S>(&tree, qs, a.k, t.traversal)?
        }
        TreeKind::Cover => {
            let tree = CoverTree::new(&reference, t.metric, t.base)?;
            eprintln!("built cover tree ({} nodes) in {:.4}s", tree.node_count(), start.elapsed().as_secs_f64());
            knn_search::<_, S>(&tree, qs, a.k, t.traversal)?
        }
    };
    eprintln!("searched {} queries in {:.4}s total", result.len(), start.elapsed().as_secs_f64());
    stdout_or_file(a.neighbors_out.as_deref(), |w| write_csv(w, result.indices(), a.k))?;
    if let Some(p) = &a.distances_out {
        stdout_or_file(Some(p), |w| write_csv(w, result.distances(), a.k))?;
    }
    Ok(())
}

fn range(a: RangeArgs) -> Result<()> {
    let (reference, query) = load_inputs(&a.input)?;
    let qs = query.as_ref().map_or(QuerySet::Reference, QuerySet::Points);
    let t = &a.tree;
    let result: RangeResult = match t.tree {
        TreeKind::Kd => {
            let tree = KdTree::new(&reference, t.metric, t.leaf_size)?;
            range_search(&tree, qs, a.low, a.high, t.traversal)?
        }
        TreeKind::Cover => {
            let tree = CoverTree::new(&reference, t.metric, t.base)?;
            range_search(&tree, qs, a.low, a.high, t.traversal)?
        }
    };
    stdout_or_file(a.out.as_deref(), |w| w.write_all(result.to_lines().as_bytes()))
}

fn kmeans(a: KMeansArgs) -> Result<()> {
    let data = load_csv(&a.input, a.header)?;
    let model = KMeans::with_policies(a.clusters, a.metric, a.init, a.empty)
        .max_iterations(a.max_iterations)
        .tolerance(a.tolerance)
        .seed(a.seed);
    let start = Instant::now();
    let result = match &a.initial_centroids {
        Some(p) => {
            let initial = load_csv(p, a.header)?;
            model.cluster_from(&data, &initial)?
        }
        None => model.cluster(&data)?,
    };
    eprintln!("clustered {} points in {:.4}s", data.len(), start.elapsed().as_secs_f64());
    match &a.centroids_out {
        Some(p) => save_csv(&result.centroids, p)?,
        None => eprintln!("no --centroids-out given; centroids not written"),
    }
    if let Some(p) = &a.assignments_out {
        save_index_csv(&result.assignments, 1, p)?;
    }
    println!("objective={}", result.objective);
    println!("iterations={}", result.iterations);
    println!("converged={}", result.converged);
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    let data = generate_uniform(a.rows, a.cols, &mut SeededRng::new(a.seed))?;
    save_csv(&data, &a.out)
}

fn bench(a: BenchArgs) -> Result<()> {
    let mut manifest = BenchManifest::from_file(&a.manifest)?;
    if a.trials == 0 {
        return Err(Error::invalid("--trials must be at least 1"));
    }
    manifest.trials = a.trials;
    manifest.warmup = a.warmup;
    let report = run_bench(&manifest);
    for row in report.failures() {
        eprintln!("entry {} failed", row.dataset);
    }
    print!("{}", emit_report(&report, a.format));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn long_flags(sub: &str) -> Vec<String> {
        let cmd = Cli::command();
        let sub = cmd.find_subcommand(sub).unwrap();
        sub.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect()
    }

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn shared_vocabulary() {
        let tree_flags = ["reference", "query", "header", "tree", "traversal", "metric", "leaf-size", "base"];
        for sub in ["knn", "fnn", "range"] {
            let flags = long_flags(sub);
            for f in tree_flags {
                assert!(flags.iter().any(|x| x == f), "{sub} lacks --{f}");
            }
        }
        assert_eq!(long_flags("knn"), long_flags("fnn"));
        for sub in ["kmeans", "gen"] {
            assert!(long_flags(sub).iter().any(|x| x == "seed"));
        }
        let flags = long_flags("kmeans");
        assert!(flags.iter().any(|x| x == "metric"));
        assert!(flags.iter().any(|x| x == "header"));
        let help = Cli::command().render_long_help().to_string();
        for sub in ["knn", "fnn", "range", "kmeans", "gen", "bench"] {
            assert!(help.contains(sub));
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["mlcore", "knn", "--k", "3"]), 1);
        assert_eq!(run(["mlcore", "knn", "--reference", "x.csv", "--k", "3", "--bogus"]), 1);
        assert_eq!(run(["mlcore", "knn", "--reference", "x.csv", "--k", "3", "--tree", "ball"]), 1);
        assert_eq!(run(["mlcore", "frobnicate"]), 1);
        assert_eq!(run(["mlcore", "--help"]), 0);
    }
}
