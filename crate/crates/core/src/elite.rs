//! Dynamic elite pool and Cauchy-Gaussian perturbation of the global best.

use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};
use crate::random::RandomSource;
use crate::solution::{CandidateSolution, Population};
use crate::space::SearchSpace;

/// The three best positions of a generation plus their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ElitePool {
    pub members: [Vec<f64>; 4],
}

impl ElitePool {
    pub fn from_top3(first: Vec<f64>, second: Vec<f64>, third: Vec<f64>) -> Self {
        let mean = (0..first.len())
            .map(|j| (first[j] + second[j] + third[j]) / 3.0)
            .collect();
        Self {
            members: [first, second, third, mean],
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.members[3]
    }
}

pub fn build_elite_pool(pop: &Population) -> Result<ElitePool> {
    if pop.len() < 3 {
        return Err(QhdeError::config(format!(
            "elite pool needs at least 3 members, population has {}",
            pop.len()
        )));
    }
    let order = pop.ranked_indices()?;
    let pick = |k: usize| pop.members[order[k]].position.clone();
    Ok(ElitePool::from_top3(pick(0), pick(1), pick(2)))
}

/// How the Cauchy weight evolves over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum RhoSchedule {
    /// `1 - t / t_max`: Cauchy-heavy early, Gaussian-heavy late.
    Linear,
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbParams {
    pub rho: RhoSchedule,
}

impl Default for PerturbParams {
    fn default() -> Self {
        Self {
            rho: RhoSchedule::Linear,
        }
    }
}

impl PerturbParams {
    pub fn validate(&self) -> Result<()> {
        match self.rho {
            RhoSchedule::Constant(r) if !(0.0..=1.0).contains(&r) => Err(QhdeError::config(
                format!("mixing weight {r} outside [0, 1]"),
            )),
            _ => Ok(()),
        }
    }

    pub fn rho_at(&self, t: usize, t_max: usize) -> f64 {
        match self.rho {
            RhoSchedule::Linear if t_max > 0 => 1.0 - t.min(t_max) as f64 / t_max as f64,
            RhoSchedule::Linear => 0.0,
            RhoSchedule::Constant(r) => r,
        }
    }
}

/// Multiplier `rho * c + (1 - rho) * g` for one dimension.
pub fn mixed_multiplier(rho: f64, cauchy: f64, gauss: f64) -> f64 {
    rho * cauchy + (1.0 - rho) * gauss
}

/// Perturb one uniformly chosen pool member elementwise.
///
/// Draw order: pool index, then per dimension a Cauchy and a normal draw.
pub fn perturb_best(
    pool: &ElitePool,
    rho: f64,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(QhdeError::contract(format!(
            "mixing weight {rho} outside [0, 1]"
        )));
    }
    let elite = &pool.members[rng.index(pool.members.len())];
    space.check_len(elite)?;
    let mut out: Vec<f64> = elite
        .iter()
        .map(|e| {
            let c = rng.cauchy();
            let g = rng.normal();
            e * mixed_multiplier(rho, c, g)
        })
        .collect();
    space.clamp_in_place(&mut out);
    Ok(out)
}

/// Replace the tracked best only on strict improvement.
pub fn accept_best(
    candidate: CandidateSolution,
    incumbent_best: CandidateSolution,
) -> Result<CandidateSolution> {
    if candidate.fitness()? < incumbent_best.fitness()? {
        Ok(candidate)
    } else {
        Ok(incumbent_best)
    }
}
