//! Box-constrained search spaces and boundary repair.

use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};

/// Per-dimension lower/upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(QhdeError::config(
                "search space needs at least one dimension",
            ));
        }
        if lower.len() != upper.len() {
            return Err(QhdeError::config(format!(
                "bound lengths differ: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(QhdeError::config(format!(
                    "dimension {j}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same `[lower, upper]` interval on every dimension.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dim()
            && position
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    pub(crate) fn check_len(&self, position: &[f64]) -> Result<()> {
        if position.len() != self.dim() {
            return Err(QhdeError::contract(format!(
                "position has {} components, search space has {}",
                position.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// In-place clamp; caller guarantees the length.
    pub(crate) fn clamp_in_place(&self, position: &mut [f64]) {
        debug_assert_eq!(position.len(), self.dim());
        for ((x, lo), hi) in position.iter_mut().zip(&self.lower).zip(&self.upper) {
            // NaN becomes the lower bound so that repaired positions are always in the box.
            *x = if x.is_nan() { *lo } else { x.clamp(*lo, *hi) };
        }
    }
}

/// Componentwise clamp into the box. Components already inside are returned unchanged.
pub fn clamp_to_bounds(position: &[f64], space: &SearchSpace) -> Result<Vec<f64>> {
    space.check_len(position)?;
    let mut out = position.to_vec();
    space.clamp_in_place(&mut out);
    Ok(out)
}
