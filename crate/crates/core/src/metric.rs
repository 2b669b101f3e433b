//! Distance policies.
//!
//! Algorithms in this crate are generic over a [`Metric`], so a caller can
//! swap Euclidean distance for Manhattan distance (or any other Lp metric,
//! or a type of their own) without touching the algorithm. The tree bounds
//! only need one extra capability from a metric: folding a vector of
//! per-coordinate gaps into a distance, which every Lp norm supports.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub trait Metric: Clone + Send + Sync + fmt::Debug {
    /// Folds per-coordinate absolute differences into a distance.
    ///
    /// Must be monotone in every argument; the kd-tree bounds rely on it.
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64;

    /// Distance between two points of equal dimensionality.
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        self.norm(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
    }

    /// Like [`Metric::distance`], but rejects points of different lengths.
    fn checked_distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(self.distance(a, b))
    }
}

/// L2 distance, the default everywhere.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EuclideanDistance;

impl Metric for EuclideanDistance {
    #[inline]
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64 {
        abs_diffs.map(|g| g * g).sum::<f64>().sqrt()
    }

    #[inline]
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        let mut acc = 0.0;
        for i in 0..n {
            let g = a[i] - b[i];
            acc += g * g;
        }
        acc.sqrt()
    }
}

/// L1 distance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ManhattanDistance;

impl Metric for ManhattanDistance {
    #[inline]
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64 {
        abs_diffs.sum()
    }
}

/// General Lp distance for `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpDistance {
    p: f64,
}

impl LpDistance {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid(format!("Lp metric needs finite p >= 1, got {p}")));
        }
        Ok(LpDistance { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Metric for LpDistance {
    #[inline]
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64 {
        let p = self.p;
        abs_diffs.map(|g| g.powf(p)).sum::<f64>().powf(p.recip())
    }
}

/// A metric chosen at run time, for front ends that parse `l1` / `l2` / `lp:P`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum MetricKind {
    Manhattan,
    #[default]
    Euclidean,
    Lp(LpDistance),
}

impl Metric for MetricKind {
    #[inline]
    fn norm<I: Iterator<Item = f64>>(&self, abs_diffs: I) -> f64 {
        match self {
            MetricKind::Manhattan => ManhattanDistance.norm(abs_diffs),
            MetricKind::Euclidean => EuclideanDistance.norm(abs_diffs),
            MetricKind::Lp(m) => m.norm(abs_diffs),
        }
    }

    #[inline]
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            MetricKind::Manhattan => ManhattanDistance.distance(a, b),
            MetricKind::Euclidean => EuclideanDistance.distance(a, b),
            MetricKind::Lp(m) => m.distance(a, b),
        }
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "manhattan" => Ok(MetricKind::Manhattan),
            "l2" | "euclidean" => Ok(MetricKind::Euclidean),
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::invalid(format!("unknown metric {s:?}")))?;
                Ok(MetricKind::Lp(LpDistance::new(p)?))
            }
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Manhattan => f.write_str("l1"),
            MetricKind::Euclidean => f.write_str("l2"),
            MetricKind::Lp(m) => write!(f, "lp:{}", m.p()),
        }
    }
}

/// `(sum |a_i - b_i|^p)^(1/p)`, with the usual fast paths for p = 1 and p = 2.
pub fn lp_distance(a: &[f64], b: &[f64], p: f64) -> Result<f64> {
    if p == 1.0 {
        ManhattanDistance.checked_distance(a, b)
    } else if p == 2.0 {
        EuclideanDistance.checked_distance(a, b)
    } else {
        LpDistance::new(p)?.checked_distance(a, b)
    }
}
