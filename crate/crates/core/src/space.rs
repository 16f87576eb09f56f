//! Closed intervals and axis-aligned search spaces.

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with finite, ordered bounds.
///
/// Degenerate (zero-width) intervals are allowed; they show up naturally as
/// bisection narrows a variable down to a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Midpoint computed as `lo + width/2` rather than `(lo+hi)/2`, so the
    /// result stays inside the interval even when `lo + hi` would lose
    /// precision or overflow.
    pub fn midpoint(&self) -> f64 {
        self.lo + self.width() / 2.0
    }

    /// Splits at the midpoint into the lower and upper halves.
    ///
    /// The halves share the midpoint as a boundary and each has half the
    /// original width (up to floating-point rounding at the coordinate
    /// scale).
    pub fn split(&self) -> (Interval, Interval) {
        let mid = self.midpoint();
        (
            Interval {
                lo: self.lo,
                hi: mid,
            },
            Interval {
                lo: mid,
                hi: self.hi,
            },
        )
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True if `self` lies entirely within `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// An axis-aligned box: one interval per variable, at least one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    intervals: Vec<Interval>,
}

impl SearchSpace {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptySearchSpace);
        }
        Ok(Self { intervals })
    }

    /// `dim` copies of `[lo, hi]`.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        let iv = Interval::new(lo, hi)?;
        Self::new(vec![iv; dim])
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn interval(&self, j: usize) -> Interval {
        self.intervals[j]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub(crate) fn set_interval(&mut self, j: usize, iv: Interval) {
        self.intervals[j] = iv;
    }

    pub fn widths(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::width).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.intervals
            .iter()
            .map(Interval::width)
            .fold(0.0, f64::max)
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::midpoint).collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && self
                .intervals
                .iter()
                .zip(point)
                .all(|(iv, &x)| iv.contains(x))
    }

    /// True if every interval of `self` is contained in the matching
    /// interval of `other`.
    pub fn is_subset_of(&self, other: &SearchSpace) -> bool {
        self.dim() == other.dim()
            && self
                .intervals
                .iter()
                .zip(other.intervals())
                .all(|(a, b)| a.is_subset_of(b))
    }
}
