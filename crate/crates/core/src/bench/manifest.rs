use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kmeans::{EmptyKind, InitKind, DEFAULT_MAX_ITERATIONS};
use crate::metric::MetricKind;
use crate::neighbor::Traversal;
use crate::tree::{DEFAULT_BASE, DEFAULT_LEAF_SIZE};

pub const DEFAULT_TRIALS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    Generated { rows: usize, cols: usize, seed: u64 },
}

impl FromStr for DataSource {
    type Err = Error;

    /// `gen:ROWSxCOLS:SEED` or a file path.
    fn from_str(s: &str) -> Result<Self> {
        let Some(spec) = s.strip_prefix("gen:") else {
            return Ok(DataSource::File(PathBuf::from(s)));
        };
        let bad = || Error::invalid(format!("generator spec {s:?} is not gen:ROWSxCOLS:SEED"));
        let (shape, seed) = spec.split_once(':').ok_or_else(bad)?;
        let (rows, cols) = shape.split_once('x').ok_or_else(bad)?;
        Ok(DataSource::Generated {
            rows: rows.trim().parse().map_err(|_| bad())?,
            cols: cols.trim().parse().map_err(|_| bad())?,
            seed: seed.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for DataSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSource::File(p) => write!(f, "{}", p.display()),
            DataSource::Generated { rows, cols, seed } => write!(f, "gen:{rows}x{cols}:{seed}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    Kd,
    Cover,
}

impl FromStr for TreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kd" => Ok(TreeKind::Kd),
            "cover" => Ok(TreeKind::Cover),
            _ => Err(Error::invalid(format!("unknown tree {s:?}"))),
        }
    }
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeKind::Kd => "kd",
            TreeKind::Cover => "cover",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnVariant {
    pub tree: TreeKind,
    pub traversal: Traversal,
    pub metric: MetricKind,
    pub leaf_size: usize,
    pub base: f64,
}

impl Default for KnnVariant {
    fn default() -> Self {
        KnnVariant {
            tree: TreeKind::Kd,
            traversal: Traversal::DualTree,
            metric: MetricKind::Euclidean,
            leaf_size: DEFAULT_LEAF_SIZE,
            base: DEFAULT_BASE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansVariant {
    pub init: InitKind,
    pub empty: EmptyKind,
    pub metric: MetricKind,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for KMeansVariant {
    fn default() -> Self {
        KMeansVariant {
            init: InitKind::default(),
            empty: EmptyKind::default(),
            metric: MetricKind::Euclidean,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchTask {
    Knn(KnnVariant),
    KMeans(KMeansVariant),
}

impl BenchTask {
    pub fn name(&self) -> &'static str {
        match self {
            BenchTask::Knn(_) => "knn",
            BenchTask::KMeans(_) => "kmeans",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchEntry {
    pub name: String,
    pub source: DataSource,
    /// Neighbor count for k-NN, cluster count for k-means.
    pub k: usize,
    pub task: BenchTask,
    /// Variant flags as written, for labelling report rows.
    pub label: String,
}

/// Benchmark plan. One entry per line:
///
/// ```text
/// # name, task, path | gen:ROWSxCOLS:SEED, k, flags...
/// wine,  knn,    data/wine.csv,      3, tree=kd, traversal=dual
/// randu, kmeans, gen:100000x10:1,    75, init=kmeanspp, seed=4
/// ```
///
/// Relative paths resolve against the manifest's directory. Lines starting
/// with `#` and blank lines are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchManifest {
    pub entries: Vec<BenchEntry>,
    pub trials: usize,
    /// Run one untimed trial before the timed ones.
    pub warmup: bool,
}

impl BenchManifest {
    pub fn new(entries: Vec<BenchEntry>) -> Self {
        BenchManifest {
            entries,
            trials: DEFAULT_TRIALS,
            warmup: false,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        let mut names = HashSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = parse_entry(line, base_dir)
                .map_err(|e| Error::invalid(format!("manifest line {}: {e}", lineno + 1)))?;
            if !names.insert(entry.name.clone()) {
                return Err(Error::invalid(format!(
                    "manifest line {}: duplicate entry name {:?}",
                    lineno + 1,
                    entry.name
                )));
            }
            entries.push(entry);
        }
        Ok(BenchManifest::new(entries))
    }
}

fn parse_entry(line: &str, base_dir: &Path) -> Result<BenchEntry> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() < 4 {
        return Err(Error::invalid("expected at least name, task, source, k"));
    }
    let name = fields[0].to_string();
    if name.is_empty() {
        return Err(Error::invalid("empty entry name"));
    }
    let source = match fields[2].parse()? {
        DataSource::File(p) if p.is_relative() => DataSource::File(base_dir.join(p)),
        other => other,
    };
    let k: usize = fields[3]
        .parse()
        .map_err(|_| Error::invalid(format!("k {:?} is not a count", fields[3])))?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let flags: Vec<(&str, &str)> = fields[4..]
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| f.split_once('=').ok_or_else(|| Error::invalid(format!("flag {f:?} is not key=value"))))
        .collect::<Result<_>>()?;

    let task = match fields[1] {
        "knn" => {
            let mut v = KnnVariant::default();
            for &(key, value) in &flags {
                match key {
                    "tree" => v.tree = value.parse()?,
                    "traversal" => v.traversal = value.parse()?,
                    "metric" => v.metric = value.parse()?,
                    "leaf-size" => v.leaf_size = parse_num(key, value)?,
                    "base" => v.base = parse_num(key, value)?,
                    _ => return Err(Error::invalid(format!("unknown knn flag {key:?}"))),
                }
            }
            BenchTask::Knn(v)
        }
        "kmeans" => {
            let mut v = KMeansVariant::default();
            for &(key, value) in &flags {
                match key {
                    "init" => v.init = value.parse()?,
                    "empty" => v.empty = value.parse()?,
                    "metric" => v.metric = value.parse()?,
                    "seed" => v.seed = parse_num(key, value)?,
                    "max-iterations" => v.max_iterations = parse_num(key, value)?,
                    _ => return Err(Error::invalid(format!("unknown kmeans flag {key:?}"))),
                }
            }
            BenchTask::KMeans(v)
        }
        other => return Err(Error::invalid(format!("unknown task {other:?}"))),
    };
    let label = match &task {
        BenchTask::Knn(v) => format!("{}/{}/{}", v.tree, v.traversal, v.metric),
        BenchTask::KMeans(v) => format!(
            "{}/{}/{}",
            match v.init {
                InitKind::RandomPartition => "random",
                InitKind::KMeansPlusPlus => "kmeanspp",
            },
            match v.empty {
                EmptyKind::Allow => "allow",
                EmptyKind::Reseed => "reseed",
            },
            v.metric
        ),
    };
    Ok(BenchEntry {
        name,
        source,
        k,
        task,
        label,
    })
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("flag {key} has bad value {value:?}")))
}
