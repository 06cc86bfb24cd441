//! Objectives and the fitness convention.
//!
//! The optimizer always minimizes. Maximization problems are negated at the
//! objective boundary by [`internal_fitness`], and non-finite scores become
//! `+inf` so that a failed evaluation loses every comparison without
//! aborting the run.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Map a raw score into the internal (minimization) sense.
    pub fn to_internal(self, score: f64) -> f64 {
        match self {
            Sense::Minimize => score,
            Sense::Maximize => -score,
        }
    }

    /// Inverse of [`Sense::to_internal`], used for reported metrics.
    pub fn to_reported(self, fitness: f64) -> f64 {
        match self {
            Sense::Minimize => fitness,
            Sense::Maximize => -fitness,
        }
    }
}

/// A pure scoring function over position vectors.
///
/// Implementations must be deterministic and side-effect free; they are
/// called concurrently from replicate workers.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;

    fn sense(&self) -> Sense {
        Sense::Minimize
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn evaluate(&self, x: &[f64]) -> f64 {
        (**self).evaluate(x)
    }

    fn sense(&self) -> Sense {
        (**self).sense()
    }
}

/// Adapter turning a closure into an [`Objective`].
pub struct FnObjective<F> {
    f: F,
    sense: Sense,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn minimize(f: F) -> Self {
        Self {
            f,
            sense: Sense::Minimize,
        }
    }

    pub fn maximize(f: F) -> Self {
        Self {
            f,
            sense: Sense::Maximize,
        }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn sense(&self) -> Sense {
        self.sense
    }
}

/// Evaluate `x` in the internal minimization sense; non-finite results map to `+inf`.
pub fn internal_fitness<O: Objective + ?Sized>(objective: &O, x: &[f64]) -> f64 {
    let v = objective.sense().to_internal(objective.evaluate(x));
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

/// Outcome of comparing a challenger against an incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitnessOrdering {
    FirstBetter,
    SecondBetter,
    /// Equal fitness; callers keep the incumbent (second argument).
    Tie,
}

/// Compare two internal-sense fitness values, `a` the challenger and `b` the incumbent.
pub fn compare_fitness(a: f64, b: f64) -> Result<FitnessOrdering> {
    if a.is_nan() || b.is_nan() {
        return Err(QhdeError::contract("NaN fitness cannot be compared"));
    }
    Ok(
        match a.partial_cmp(&b).expect("non-NaN values are ordered") {
            Ordering::Less => FitnessOrdering::FirstBetter,
            Ordering::Greater => FitnessOrdering::SecondBetter,
            Ordering::Equal => FitnessOrdering::Tie,
        },
    )
}
