//! Classic differential evolution operators: rand/1 mutation, binomial
//! crossover and greedy selection.

use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};
use crate::random::RandomSource;
use crate::solution::CandidateSolution;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    /// Mutation scale factor `F`, in `[0, 2]`.
    pub f_weight: f64,
    /// Crossover probability, in `[0, 1]`.
    pub cr: f64,
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.f_weight) {
            return Err(QhdeError::config(format!(
                "mutation factor {} outside [0, 2]",
                self.f_weight
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(QhdeError::config(format!(
                "crossover probability {} outside [0, 1]",
                self.cr
            )));
        }
        Ok(())
    }
}

/// Three distinct donor indices, all different from `target`.
///
/// Drawn in order r1, r2, r3 by rejection.
pub fn pick_donors(n: usize, target: usize, rng: &mut RandomSource) -> Result<[usize; 3]> {
    if n < 4 {
        return Err(QhdeError::config(format!(
            "rand/1 mutation needs at least 4 members, population has {n}"
        )));
    }
    let mut draw = |taken: &[usize]| loop {
        let r = rng.index(n);
        if r != target && !taken.contains(&r) {
            return r;
        }
    };
    let r1 = draw(&[]);
    let r2 = draw(&[r1]);
    let r3 = draw(&[r1, r2]);
    Ok([r1, r2, r3])
}

/// `x_r1 + F * (x_r2 - x_r3)`, clamped.
pub fn differential_mutant(
    base: &[f64],
    plus: &[f64],
    minus: &[f64],
    f_weight: f64,
    space: &SearchSpace,
) -> Vec<f64> {
    let mut v: Vec<f64> = base
        .iter()
        .zip(plus.iter().zip(minus))
        .map(|(b, (p, m))| b + f_weight * (p - m))
        .collect();
    space.clamp_in_place(&mut v);
    v
}

/// DE/rand/1 mutant for member `i`.
pub fn mutate_rand1(
    positions: &[Vec<f64>],
    i: usize,
    params: &DeParams,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    let [r1, r2, r3] = pick_donors(positions.len(), i, rng)?;
    Ok(differential_mutant(
        &positions[r1],
        &positions[r2],
        &positions[r3],
        params.f_weight,
        space,
    ))
}

/// Binomial crossover.
///
/// Draws the forced index first, then one uniform per component (always all
/// of them, so the draw count does not depend on `cr`).
pub fn crossover_binomial(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if target.len() != mutant.len() {
        return Err(QhdeError::contract(format!(
            "crossover of vectors with lengths {} and {}",
            target.len(),
            mutant.len()
        )));
    }
    let forced = rng.index(target.len());
    Ok(target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (t, m))| {
            let u = rng.uniform();
            if u < cr || j == forced {
                *m
            } else {
                *t
            }
        })
        .collect())
}

/// Keep the trial when its fitness is no worse than the incumbent's.
pub fn select_greedy(
    incumbent: CandidateSolution,
    trial: CandidateSolution,
) -> Result<CandidateSolution> {
    if trial.fitness()? <= incumbent.fitness()? {
        Ok(trial)
    } else {
        Ok(incumbent)
    }
}
