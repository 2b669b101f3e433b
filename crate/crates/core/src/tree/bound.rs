use crate::error::{Error, Result};
use crate::metric::Metric;

/// Axis-aligned bounding box: one closed interval per dimension.
///
/// Distances to the box are folded through [`Metric::norm`], so they are
/// exact for every Lp metric.
#[derive(Debug, Clone, PartialEq)]
pub struct HRectBound {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl HRectBound {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l.is_nan() || h.is_nan() || l > h) {
            return Err(Error::invalid("bound has an interval with lo > hi"));
        }
        Ok(HRectBound { lo, hi })
    }

    /// Tight box around the given points. `points` must be non-empty.
    pub(crate) fn enclosing<'p>(d: usize, mut points: impl Iterator<Item = &'p [f64]>) -> Self {
        let first = points.next().expect("bound over no points");
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        debug_assert_eq!(lo.len(), d);
        for p in points {
            for j in 0..d {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        HRectBound { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn width(&self, j: usize) -> f64 {
        self.hi[j] - self.lo[j]
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        q.len() == self.dim() && q.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| l <= x && x <= h)
    }

    fn check(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }

    pub fn min_distance_to_point<M: Metric>(&self, q: &[f64], metric: &M) -> Result<f64> {
        self.check(q.len())?;
        Ok(self.min_point(q, metric))
    }

    pub fn max_distance_to_point<M: Metric>(&self, q: &[f64], metric: &M) -> Result<f64> {
        self.check(q.len())?;
        Ok(self.max_point(q, metric))
    }

    pub fn min_distance_to_bound<M: Metric>(&self, other: &HRectBound, metric: &M) -> Result<f64> {
        self.check(other.dim())?;
        Ok(self.min_bound(other, metric))
    }

    pub fn max_distance_to_bound<M: Metric>(&self, other: &HRectBound, metric: &M) -> Result<f64> {
        self.check(other.dim())?;
        Ok(self.max_bound(other, metric))
    }

    #[inline]
    pub(crate) fn min_point<M: Metric>(&self, q: &[f64], metric: &M) -> f64 {
        metric.norm(
            q.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .map(|(&x, (&l, &h))| gap(l, h, x)),
        )
    }

    #[inline]
    pub(crate) fn max_point<M: Metric>(&self, q: &[f64], metric: &M) -> f64 {
        metric.norm(
            q.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .map(|(&x, (&l, &h))| larger(x - l, h - x)),
        )
    }

    #[inline]
    pub(crate) fn min_bound<M: Metric>(&self, other: &HRectBound, metric: &M) -> f64 {
        metric.norm(
            self.lo
                .iter()
                .zip(&self.hi)
                .zip(other.lo.iter().zip(&other.hi))
                .map(|((&sl, &sh), (&ol, &oh))| larger(larger(ol - sh, sl - oh), 0.0)),
        )
    }

    #[inline]
    pub(crate) fn max_bound<M: Metric>(&self, other: &HRectBound, metric: &M) -> f64 {
        metric.norm(
            self.lo
                .iter()
                .zip(&self.hi)
                .zip(other.lo.iter().zip(&other.hi))
                .map(|((&sl, &sh), (&ol, &oh))| larger(oh - sl, sh - ol)),
        )
    }
}

// Coordinates are always finite, so plain comparisons stand in for
// `f64::max` and its NaN handling.
#[inline(always)]
fn larger(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

/// Distance from `x` to the interval `[l, h]`.
#[inline(always)]
fn gap(l: f64, h: f64, x: f64) -> f64 {
    // Branch-free: at most one of the two differences is positive.
    larger(larger(l - x, x - h), 0.0)
}
