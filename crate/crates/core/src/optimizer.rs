//! The QHDE generation loop and its ablation switches.
//!
//! One run proceeds as:
//!
//! 1. initialization (good point set + chaotic reverse learning when the
//!    `init` strategy is on, uniform sampling otherwise);
//! 2. for each generation `t = 1..=t_max`, for each member `i` in order:
//!    rand/1 mutation, binomial crossover, trial evaluation, then (with the
//!    `tunnel` strategy) a tunneling gate and an optional tunneling move that
//!    replaces the trial when strictly better, then greedy selection;
//! 3. the tracked best absorbs the new population's best;
//! 4. with the `elite` strategy, one elite-pool perturbation is evaluated and
//!    accepted into the tracked best on strict improvement.
//!
//! Random draws happen in exactly that order: initialization draws, then per
//! member the three donor draws, the crossover draws (forced index first,
//! then one uniform per dimension), the tunneling gate uniform and, when the
//! gate opens, one normal per dimension; finally the elite draws (pool index,
//! then a Cauchy and a normal per dimension). Disabled strategies draw
//! nothing, so the all-off configuration is plain DE/rand/1/bin.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::de::{crossover_binomial, mutate_rand1, select_greedy, DeParams};
use crate::elite::{accept_best, build_elite_pool, perturb_best, PerturbParams};
use crate::error::{QhdeError, Result};
use crate::initializer::{initialize_population, DEFAULT_MU};
use crate::objective::{Objective, Sense};
use crate::random::RandomSource;
use crate::solution::{CandidateSolution, Population};
use crate::space::SearchSpace;
use crate::tunneling::{tunnel_move, tunneling_probability, BarrierField, TunnelingParams};

/// Which of the three QHDE strategies are enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategies {
    /// Good point set + chaotic reverse-learning initialization.
    pub init: bool,
    /// Potential-driven quantum tunneling.
    pub tunnel: bool,
    /// Elite pool with Cauchy-Gaussian perturbation.
    pub elite: bool,
}

impl Strategies {
    pub const DE: Self = Self::new(false, false, false);
    pub const QHDE: Self = Self::new(true, true, true);

    /// The baseline, the six ablation variants and full QHDE.
    pub const ALL: [Self; 8] = [
        Self::DE,
        Self::new(true, false, false),
        Self::new(false, true, false),
        Self::new(false, false, true),
        Self::new(true, true, false),
        Self::new(true, false, true),
        Self::new(false, true, true),
        Self::QHDE,
    ];

    pub const fn new(init: bool, tunnel: bool, elite: bool) -> Self {
        Self {
            init,
            tunnel,
            elite,
        }
    }

    /// `DE`, `QHDE1`, `QHDE2`, `QHDE3`, `QHDE12`, `QHDE13`, `QHDE23` or `QHDE`.
    pub fn label(&self) -> String {
        let digits: String = [(self.init, '1'), (self.tunnel, '2'), (self.elite, '3')]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, d)| *d)
            .collect();
        match digits.as_str() {
            "" => "DE".to_string(),
            "123" => "QHDE".to_string(),
            d => format!("QHDE{d}"),
        }
    }
}

impl fmt::Display for Strategies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Strategies {
    type Err = QhdeError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|v| v.label().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| QhdeError::config(format!("unknown variant label {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QhdeConfig {
    pub population: usize,
    pub max_generations: usize,
    pub de: DeParams,
    pub tunneling: TunnelingParams,
    pub perturb: PerturbParams,
    pub strategies: Strategies,
    /// Logistic-map coefficient for chaotic reverse learning.
    pub mu: f64,
    pub seed: u64,
    pub stream: u64,
}

impl Default for QhdeConfig {
    fn default() -> Self {
        Self {
            population: 30,
            max_generations: 500,
            de: DeParams {
                f_weight: 0.5,
                cr: 0.1,
            },
            tunneling: TunnelingParams::default(),
            perturb: PerturbParams::default(),
            strategies: Strategies::QHDE,
            mu: DEFAULT_MU,
            seed: 0,
            stream: 0,
        }
    }
}

impl QhdeConfig {
    pub fn with_strategies(mut self, strategies: Strategies) -> Self {
        self.strategies = strategies;
        self
    }

    pub fn with_seed(mut self, seed: u64, stream: u64) -> Self {
        self.seed = seed;
        self.stream = stream;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(QhdeError::config(format!(
                "population {} below the minimum of 4",
                self.population
            )));
        }
        if self.max_generations < 1 {
            return Err(QhdeError::config("need at least one generation"));
        }
        self.de.validate()?;
        self.tunneling.validate()?;
        self.perturb.validate()?;
        if !(self.mu > 2.0 && self.mu <= 4.0) {
            return Err(QhdeError::config(format!(
                "logistic coefficient {} outside (2, 4]",
                self.mu
            )));
        }
        Ok(())
    }

    /// Hex digest of every setting except the replicate stream.
    pub fn fingerprint(&self) -> String {
        let mut canonical = self.clone();
        canonical.stream = 0;
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    /// Best-so-far internal fitness; index 0 is the initial population.
    pub trace: Vec<f64>,
    pub best_position: Vec<f64>,
    /// Internal (minimization) sense.
    pub best_fitness: f64,
    pub sense: Sense,
    /// Objective evaluations spent at each trace index.
    pub evaluations: Vec<usize>,
    pub wall_time: Duration,
    pub fingerprint: String,
    pub seed: u64,
    pub stream: u64,
}

impl RunRecord {
    /// Final best in the objective's own sense.
    pub fn reported_best(&self) -> f64 {
        self.sense.to_reported(self.best_fitness)
    }

    pub fn total_evaluations(&self) -> usize {
        self.evaluations.iter().sum()
    }

    /// Equality of everything except wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        bits(&self.trace) == bits(&other.trace)
            && bits(&self.best_position) == bits(&other.best_position)
            && self.best_fitness.to_bits() == other.best_fitness.to_bits()
            && self.sense == other.sense
            && self.evaluations == other.evaluations
            && self.fingerprint == other.fingerprint
            && self.seed == other.seed
            && self.stream == other.stream
    }
}

/// Run QHDE (or the configured ablation variant) on `objective`.
pub fn run<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &QhdeConfig,
) -> Result<RunRecord> {
    config.validate()?;
    let started = Instant::now();
    let mut rng = RandomSource::new(config.seed, config.stream);
    let population = initialize_population(
        config.population,
        space,
        objective,
        &mut rng,
        config.strategies.init,
        config.mu,
    )?;
    let init_evals = if config.strategies.init {
        2 * config.population
    } else {
        config.population
    };
    evolve(
        objective, space, config, population, init_evals, rng, started,
    )
}

/// Run from caller-supplied starting positions, bypassing the initializer.
///
/// Positions are clamped into `space`; the `init` strategy flag is ignored.
pub fn run_from_positions<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &QhdeConfig,
    positions: Vec<Vec<f64>>,
) -> Result<RunRecord> {
    config.validate()?;
    if positions.len() != config.population {
        return Err(QhdeError::config(format!(
            "{} starting positions for a population of {}",
            positions.len(),
            config.population
        )));
    }
    let started = Instant::now();
    let members = positions
        .into_iter()
        .map(|mut x| {
            space.check_len(&x)?;
            space.clamp_in_place(&mut x);
            Ok(CandidateSolution::evaluate(x, objective))
        })
        .collect::<Result<Vec<_>>>()?;
    let rng = RandomSource::new(config.seed, config.stream);
    let n = members.len();
    evolve(
        objective,
        space,
        config,
        Population::new(members),
        n,
        rng,
        started,
    )
}

fn evolve<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &QhdeConfig,
    mut population: Population,
    init_evals: usize,
    mut rng: RandomSource,
    started: Instant,
) -> Result<RunRecord> {
    let n = population.len();
    let t_max = config.max_generations;
    let mut best = population.members[population.best_index()?].clone();
    let mut trace = Vec::with_capacity(t_max + 1);
    let mut evaluations = Vec::with_capacity(t_max + 1);
    trace.push(best.fitness()?);
    evaluations.push(init_evals);

    for t in 1..=t_max {
        let positions: Vec<Vec<f64>> = population
            .members
            .iter()
            .map(|m| m.position.clone())
            .collect();
        let field = if config.strategies.tunnel {
            Some(BarrierField::new(
                &population.fitnesses()?,
                config.tunneling.v0,
            )?)
        } else {
            None
        };

        let mut spent = 0;
        let mut next = Vec::with_capacity(n);
        for (i, incumbent) in population.members.iter().enumerate() {
            let mutant = mutate_rand1(&positions, i, &config.de, space, &mut rng)?;
            let trial_x = crossover_binomial(&positions[i], &mutant, config.de.cr, &mut rng)?;
            let mut trial = CandidateSolution::evaluate(trial_x, objective);
            spent += 1;

            if let Some(field) = &field {
                let p =
                    tunneling_probability(field.barriers[i], field.energy, config.tunneling.gamma)?;
                if rng.uniform() < p {
                    let moved = tunnel_move(
                        &positions[i],
                        &best.position,
                        t,
                        t_max,
                        &config.tunneling,
                        space,
                        &mut rng,
                    )?;
                    let moved = CandidateSolution::evaluate(moved, objective);
                    spent += 1;
                    if moved.fitness()? < trial.fitness()? {
                        trial = moved;
                    }
                }
            }
            next.push(select_greedy(incumbent.clone(), trial)?);
        }
        population = Population {
            members: next,
            generation: t,
        };

        let generation_best = &population.members[population.best_index()?];
        best = accept_best(generation_best.clone(), best)?;

        if config.strategies.elite {
            let pool = build_elite_pool(&population)?;
            let rho = config.perturb.rho_at(t, t_max);
            let candidate = perturb_best(&pool, rho, space, &mut rng)?;
            spent += 1;
            best = accept_best(CandidateSolution::evaluate(candidate, objective), best)?;
        }

        trace.push(best.fitness()?);
        evaluations.push(spent);
    }

    Ok(RunRecord {
        best_fitness: best.fitness()?,
        best_position: best.position,
        trace,
        sense: objective.sense(),
        evaluations,
        wall_time: started.elapsed(),
        fingerprint: config.fingerprint(),
        seed: config.seed,
        stream: config.stream,
    })
}

/// `n_runs` isolated replicates on streams `0..n_runs`, in stream order.
///
/// Replicates run on the current rayon pool.
pub fn run_replicates<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    config: &QhdeConfig,
    n_runs: usize,
) -> Result<Vec<RunRecord>> {
    if n_runs < 1 {
        return Err(QhdeError::config("need at least one replicate"));
    }
    (0..n_runs as u64)
        .into_par_iter()
        .map(|stream| {
            let cfg = QhdeConfig {
                stream,
                ..config.clone()
            };
            run(objective, space, &cfg)
        })
        .collect()
}
