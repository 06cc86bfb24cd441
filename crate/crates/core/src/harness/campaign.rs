//! Campaign execution and artifact export.
//!
//! Output directory layout:
//!
//! ```text
//! <out>/campaign.toml              resolved configuration
//! <out>/summary.json               per (problem, variant) statistics, no timings
//! <out>/friedman.csv               variant,average_rank
//! <out>/timings.csv                problem,variant,mean_wall_seconds
//! <out>/portfolio_metrics.csv      only when the campaign has portfolio problems
//! <out>/convergence/<problem>__<variant>__r<rep>__s<seed>.csv
//! ```
//!
//! Convergence files hold `generation,best_fitness` in the internal
//! minimization sense (portfolio objectives appear negated). Replicate `r` of
//! every variant uses the random stream `r` of the campaign seed, so variants
//! are compared on paired streams.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, Problem, ProblemKind};
use super::stats::{friedman_ranks, median, SummaryStats};
use crate::error::{QhdeError, Result};
use crate::objective::{Objective, Sense};
use crate::optimizer::{run_replicates, RunRecord, Strategies};
use crate::portfolio::{portfolio_metrics, PortfolioMetrics};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "QHDE_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub schema_version: u32,
    pub name: String,
    pub seed: u64,
    pub runs: usize,
    pub population: usize,
    pub max_generations: usize,
    pub problems: Vec<String>,
    pub variants: Vec<String>,
    /// Problem-major, variants in campaign order.
    pub results: Vec<ResultEntry>,
    pub friedman: Vec<RankEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub problem: String,
    pub variant: String,
    pub sense: Sense,
    pub fingerprint: String,
    /// Over internal-sense final fitness.
    pub stats: SummaryStats,
    /// Internal-sense final fitness per replicate.
    pub final_fitness: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<PortfolioSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSummary {
    pub median_objective: f64,
    pub median_sharpe: f64,
    pub median_allocation: f64,
    pub median_allocation_error: f64,
    pub runs: Vec<PortfolioMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub variant: String,
    pub average_rank: f64,
}

/// In-memory campaign outcome.
#[derive(Debug, Clone)]
pub struct CampaignRun {
    pub summary: CampaignSummary,
    /// `records[problem][variant][replicate]`.
    pub records: Vec<Vec<Vec<RunRecord>>>,
}

impl CampaignSummary {
    pub fn entry(&self, problem: &str, variant: &str) -> Option<&ResultEntry> {
        self.results
            .iter()
            .find(|e| e.problem == problem && e.variant == variant)
    }

    pub fn rank_of(&self, variant: &str) -> Option<f64> {
        self.friedman
            .iter()
            .find(|r| r.variant == variant)
            .map(|r| r.average_rank)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Thread count requested through `QHDE_THREADS`; `None` means rayon's default.
pub fn configured_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(QhdeError::config(format!(
                "{THREADS_ENV}={v:?} is not a positive integer"
            ))),
        },
        _ => Ok(None),
    }
}

/// Run every (problem, variant, replicate) without touching the file system.
pub fn execute_campaign(config: &CampaignConfig) -> Result<CampaignRun> {
    config.validate()?;
    let variants = config.variants()?;
    let problems = config.resolve_problems()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| QhdeError::config(format!("thread pool: {e}")))?;
    let jobs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| (0..variants.len()).map(move |v| (p, v)))
        .collect();
    let outcomes: Vec<Vec<RunRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, v)| {
                let mut cfg = config.algorithm.to_config(variants[v]);
                cfg.seed = config.campaign.seed;
                let problem = &problems[p];
                run_replicates(problem, &problem.space, &cfg, config.campaign.runs)
            })
            .collect::<Result<_>>()
    })?;
    let mut records: Vec<Vec<Vec<RunRecord>>> = vec![Vec::new(); problems.len()];
    for ((p, _), recs) in jobs.iter().zip(outcomes) {
        records[*p].push(recs);
    }
    let summary = summarize(config, &problems, &variants, &records)?;
    Ok(CampaignRun { summary, records })
}

fn summarize(
    config: &CampaignConfig,
    problems: &[Problem],
    variants: &[Strategies],
    records: &[Vec<Vec<RunRecord>>],
) -> Result<CampaignSummary> {
    let mut results = Vec::new();
    let mut medians = Vec::new();
    for (problem, per_variant) in problems.iter().zip(records) {
        let mut row = Vec::new();
        for (variant, recs) in variants.iter().zip(per_variant) {
            let finals: Vec<f64> = recs.iter().map(|r| r.best_fitness).collect();
            let mut stats = SummaryStats::from_values(&finals)?;
            stats.mean_wall_seconds =
                recs.iter().map(|r| r.wall_time.as_secs_f64()).sum::<f64>() / recs.len() as f64;
            row.push(stats.median);
            let portfolio = match &problem.kind {
                ProblemKind::Portfolio(obj) => {
                    let runs: Vec<PortfolioMetrics> = recs
                        .iter()
                        .map(|r| portfolio_metrics(&r.best_position, &obj.model))
                        .collect();
                    let col = |f: fn(&PortfolioMetrics) -> f64| {
                        median(&runs.iter().map(f).collect::<Vec<_>>())
                    };
                    Some(PortfolioSummary {
                        median_objective: col(|m| m.objective),
                        median_sharpe: col(|m| m.sharpe),
                        median_allocation: col(|m| m.allocation),
                        median_allocation_error: col(|m| (m.allocation - 1.0).abs()),
                        runs,
                    })
                }
                ProblemKind::Benchmark(_) => None,
            };
            results.push(ResultEntry {
                problem: problem.label.clone(),
                variant: variant.label(),
                sense: problem.sense(),
                fingerprint: recs[0].fingerprint.clone(),
                stats,
                final_fitness: finals,
                portfolio,
            });
        }
        medians.push(row);
    }
    let ranks = if variants.len() >= 2 {
        friedman_ranks(&medians)?
    } else {
        vec![1.0]
    };
    Ok(CampaignSummary {
        schema_version: SCHEMA_VERSION,
        name: config.campaign.name.clone(),
        seed: config.campaign.seed,
        runs: config.campaign.runs,
        population: config.algorithm.population,
        max_generations: config.algorithm.max_generations,
        problems: problems.iter().map(|p| p.label.clone()).collect(),
        variants: variants.iter().map(Strategies::label).collect(),
        results,
        friedman: variants
            .iter()
            .zip(ranks)
            .map(|(v, average_rank)| RankEntry {
                variant: v.label(),
                average_rank,
            })
            .collect(),
    })
}

/// Execute the campaign and write all artifacts under `config.campaign.out`.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignRun> {
    config.validate()?;
    let out = config.campaign.out.clone();
    let conv = out.join("convergence");
    fs::create_dir_all(&conv).map_err(|e| QhdeError::io(&conv, e))?;
    let run = execute_campaign(config)?;
    write_artifacts(config, &run, &out)?;
    Ok(run)
}

pub fn convergence_file_name(problem: &str, variant: &str, replicate: u64, seed: u64) -> String {
    format!("{problem}__{variant}__r{replicate:03}__s{seed}.csv")
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| QhdeError::io(path, e))
}

fn write_artifacts(config: &CampaignConfig, run: &CampaignRun, out: &Path) -> Result<()> {
    let summary = &run.summary;
    let conv = out.join("convergence");
    for (p, per_variant) in run.records.iter().enumerate() {
        for (v, recs) in per_variant.iter().enumerate() {
            recs.par_iter().try_for_each(|r| {
                let mut csv = String::from("generation,best_fitness\n");
                for (g, f) in r.trace.iter().enumerate() {
                    writeln!(csv, "{g},{f}").unwrap();
                }
                let name = convergence_file_name(
                    &summary.problems[p],
                    &summary.variants[v],
                    r.stream,
                    r.seed,
                );
                write(&conv.join(name), &csv)
            })?;
        }
    }
    write(&out.join("summary.json"), &summary.to_json())?;
    write(&out.join("campaign.toml"), &config.to_toml_string()?)?;

    let mut ranks = String::from("variant,average_rank\n");
    for r in &summary.friedman {
        writeln!(ranks, "{},{}", r.variant, r.average_rank).unwrap();
    }
    write(&out.join("friedman.csv"), &ranks)?;

    let mut timings = String::from("problem,variant,mean_wall_seconds\n");
    let mut metrics = String::from(
        "problem,variant,median_objective,median_sharpe,median_allocation,median_allocation_error\n",
    );
    let mut any_portfolio = false;
    for e in &summary.results {
        writeln!(
            timings,
            "{},{},{}",
            e.problem, e.variant, e.stats.mean_wall_seconds
        )
        .unwrap();
        if let Some(m) = &e.portfolio {
            any_portfolio = true;
            writeln!(
                metrics,
                "{},{},{},{},{},{}",
                e.problem,
                e.variant,
                m.median_objective,
                m.median_sharpe,
                m.median_allocation,
                m.median_allocation_error
            )
            .unwrap();
        }
    }
    write(&out.join("timings.csv"), &timings)?;
    if any_portfolio {
        write(&out.join("portfolio_metrics.csv"), &metrics)?;
    }
    Ok(())
}
