//! Potential-driven quantum tunneling.
//!
//! Each member's fitness gap to the population best is mapped onto a
//! barrier height in `[0, v0]`. A member whose barrier does not exceed the
//! population's mean barrier (its "energy") tunnels freely; above it the
//! probability decays as `exp(-sqrt(v - e_k) / gamma)`. A tunneling move
//! perturbs the member with a standard-normal direction scaled by a linearly
//! decaying time coefficient and a step anchored to the distance to the best
//! position, plus a floor proportional to the search range.

use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};
use crate::random::RandomSource;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingParams {
    /// Baseline barrier height.
    pub v0: f64,
    /// Tunneling adjustment coefficient.
    pub gamma: f64,
    /// Minimum step as a fraction of each dimension's range.
    pub delta_floor: f64,
}

impl Default for TunnelingParams {
    fn default() -> Self {
        Self {
            v0: 0.5,
            gamma: 0.1,
            delta_floor: 0.02,
        }
    }
}

impl TunnelingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.v0 > 0.0 && self.v0.is_finite()) {
            return Err(QhdeError::config(format!(
                "barrier height {} must be > 0",
                self.v0
            )));
        }
        if !(0.05..=0.2).contains(&self.gamma) {
            return Err(QhdeError::config(format!(
                "tunneling coefficient {} outside [0.05, 0.2]",
                self.gamma
            )));
        }
        if !(self.delta_floor > 0.0 && self.delta_floor <= 0.1) {
            return Err(QhdeError::config(format!(
                "step floor {} outside (0, 0.1]",
                self.delta_floor
            )));
        }
        Ok(())
    }
}

/// Normalized fitness gap scaled to `[0, v0]`; zero for a flat population.
pub fn barrier_height(fit: f64, f_best: f64, f_max: f64, f_min: f64, v0: f64) -> Result<f64> {
    if ![fit, f_best, f_max, f_min, v0]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(QhdeError::contract("barrier height needs finite inputs"));
    }
    if f_max < f_min {
        return Err(QhdeError::contract(format!(
            "fitness range inverted: max {f_max} < min {f_min}"
        )));
    }
    let range = f_max - f_min;
    if range == 0.0 {
        return Ok(0.0);
    }
    Ok((fit - f_best).abs() / range * v0)
}

pub fn tunneling_probability(v: f64, e_k: f64, gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(QhdeError::config(format!(
            "tunneling coefficient {gamma} must be positive"
        )));
    }
    if v <= e_k {
        return Ok(1.0);
    }
    Ok((-(v - e_k).sqrt() / gamma).exp())
}

/// Per-generation population statistics shared by every member's tunneling decision.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierField {
    pub f_min: f64,
    pub f_max: f64,
    /// Barrier of each member, in population order.
    pub barriers: Vec<f64>,
    /// Mean barrier, the population's energy level.
    pub energy: f64,
}

impl BarrierField {
    /// Barriers over the finite fitness values. Members carrying the `+inf`
    /// failure sentinel sit at the full barrier `v0`.
    pub fn new(fitnesses: &[f64], v0: f64) -> Result<Self> {
        if fitnesses.is_empty() {
            return Err(QhdeError::contract("energy of an empty population"));
        }
        if fitnesses.iter().any(|f| f.is_nan()) {
            return Err(QhdeError::contract("NaN fitness in population"));
        }
        let finite = fitnesses.iter().copied().filter(|f| f.is_finite());
        let (f_min, f_max) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
            (lo.min(f), hi.max(f))
        });
        let barriers = if f_min > f_max {
            vec![0.0; fitnesses.len()]
        } else {
            fitnesses
                .iter()
                .map(|&f| {
                    if f.is_finite() {
                        barrier_height(f, f_min, f_max, f_min, v0)
                    } else {
                        Ok(v0)
                    }
                })
                .collect::<Result<Vec<_>>>()?
        };
        let energy = barriers.iter().sum::<f64>() / barriers.len() as f64;
        Ok(Self {
            f_min,
            f_max,
            barriers,
            energy,
        })
    }
}

/// Mean normalized barrier of a set of fitness values.
pub fn energy_level(fitnesses: &[f64], v0: f64) -> Result<f64> {
    Ok(BarrierField::new(fitnesses, v0)?.energy)
}

/// Linearly decaying time coefficient `1 - t / t_max`.
pub fn time_coefficient(t: usize, t_max: usize) -> f64 {
    if t_max == 0 {
        return 0.0;
    }
    1.0 - t.min(t_max) as f64 / t_max as f64
}

/// Tunneling move with an explicit direction vector.
pub fn tunnel_step(
    x: &[f64],
    best: &[f64],
    direction: &[f64],
    t: usize,
    t_max: usize,
    params: &TunnelingParams,
    space: &SearchSpace,
) -> Result<Vec<f64>> {
    space.check_len(x)?;
    space.check_len(best)?;
    space.check_len(direction)?;
    let time = time_coefficient(t, t_max);
    let mut out: Vec<f64> = (0..x.len())
        .map(|j| {
            let step = (best[j] - x[j]).abs() + params.delta_floor * space.width(j);
            x[j] + direction[j] * time * step
        })
        .collect();
    space.clamp_in_place(&mut out);
    Ok(out)
}

/// Tunneling move with a fresh standard-normal direction (one draw per dimension).
pub fn tunnel_move(
    x: &[f64],
    best: &[f64],
    t: usize,
    t_max: usize,
    params: &TunnelingParams,
    space: &SearchSpace,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if t > t_max {
        return Err(QhdeError::contract(format!(
            "generation {t} beyond limit {t_max}"
        )));
    }
    let direction: Vec<f64> = (0..x.len()).map(|_| rng.normal()).collect();
    tunnel_step(x, best, &direction, t, t_max, params, space)
}
