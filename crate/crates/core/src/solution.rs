use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};
use crate::objective::{internal_fitness, Objective};

/// A position with its cached internal-sense fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSolution {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
}

impl CandidateSolution {
    pub fn unevaluated(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
        }
    }

    pub fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness: Some(fitness),
        }
    }

    pub fn evaluate<O: Objective + ?Sized>(position: Vec<f64>, objective: &O) -> Self {
        let fitness = internal_fitness(objective, &position);
        Self::evaluated(position, fitness)
    }

    /// The cached fitness, or a contract error if the candidate was never evaluated.
    pub fn fitness(&self) -> Result<f64> {
        match self.fitness {
            Some(f) if f.is_nan() => Err(QhdeError::contract("candidate has NaN fitness")),
            Some(f) => Ok(f),
            None => Err(QhdeError::contract("candidate has not been evaluated")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<CandidateSolution>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<CandidateSolution>) -> Self {
        Self {
            members,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn fitnesses(&self) -> Result<Vec<f64>> {
        self.members
            .iter()
            .map(CandidateSolution::fitness)
            .collect()
    }

    /// Index of the best member; the lowest index wins ties.
    pub fn best_index(&self) -> Result<usize> {
        if self.members.is_empty() {
            return Err(QhdeError::contract("empty population has no best member"));
        }
        let mut best = 0;
        let mut best_fit = self.members[0].fitness()?;
        for (i, m) in self.members.iter().enumerate().skip(1) {
            let f = m.fitness()?;
            if f < best_fit {
                best = i;
                best_fit = f;
            }
        }
        Ok(best)
    }

    /// Member indices sorted best-first, ties by index.
    pub fn ranked_indices(&self) -> Result<Vec<usize>> {
        let fits = self.fitnesses()?;
        let mut idx: Vec<usize> = (0..fits.len()).collect();
        idx.sort_by(|&a, &b| fits[a].total_cmp(&fits[b]));
        Ok(idx)
    }
}
