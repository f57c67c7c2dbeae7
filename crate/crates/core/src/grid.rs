//! Evaluation grids for time and frequency curves.

use crate::error::{Error, Result};

/// Evenly spaced points `start + i·step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    /// `points` samples covering `[start, end]` inclusive.
    pub fn linspace(start: f64, end: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {points}")));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::Grid(format!("empty range [{start}, {end}]")));
        }
        Ok(Self {
            start,
            step: (end - start) / (points - 1) as f64,
            len: points,
        })
    }

    /// Grid starting at zero with a given step.
    pub fn from_step(step: f64, len: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || len == 0 {
            return Err(Error::Grid(format!("invalid step {step} / length {len}")));
        }
        Ok(Self {
            start: 0.0,
            step,
            len,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }
}

/// `points` logarithmically spaced values covering `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Grid(format!("need at least 2 points, got {points}")));
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Grid(format!("invalid log range [{lo}, {hi}]")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            i => (a + (b - a) * i as f64 / n).exp(),
        })
        .collect())
}
