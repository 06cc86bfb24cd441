//! Campaign description, loadable from and writable to TOML.
//!
//! ```toml
//! [campaign]
//! name = "bench"
//! seed = 42
//! runs = 30
//! out = "results/bench"
//! variants = ["DE", "QHDE"]
//!
//! [algorithm]
//! population = 30
//! max_generations = 500
//! f_weight = 0.5
//! cr = 0.1
//!
//! [[problems]]
//! kind = "suite"
//! dim = 10
//! seed = 7
//!
//! [[problems]]
//! kind = "function"
//! name = "rastrigin"
//! dim = 10
//!
//! [[problems]]
//! kind = "portfolio"
//! assets = 20
//! periods = 250
//! data_seed = 1
//! ```
//!
//! Every `[algorithm]` key is optional and falls back to the defaults of
//! [`QhdeConfig`]. A portfolio problem takes either `prices = "file.csv"` or a
//! synthetic `assets` count.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::benchmarks::{desk_suite, BenchmarkFunction, BenchmarkSpec};
use crate::de::DeParams;
use crate::elite::{PerturbParams, RhoSchedule};
use crate::error::{QhdeError, Result};
use crate::initializer::DEFAULT_MU;
use crate::objective::{Objective, Sense};
use crate::optimizer::{QhdeConfig, Strategies};
use crate::portfolio::{
    estimate_model, Penalties, PortfolioObjective, PriceMatrix, SyntheticMarket,
};
use crate::space::SearchSpace;
use crate::tunneling::TunnelingParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaign: CampaignSection,
    #[serde(default)]
    pub algorithm: AlgorithmSection,
    pub problems: Vec<ProblemSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignSection {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Variant labels, e.g. `DE`, `QHDE13`, `QHDE`.
    #[serde(default = "default_variants")]
    pub variants: Vec<String>,
}

fn default_name() -> String {
    "campaign".into()
}
fn default_runs() -> usize {
    30
}
fn default_out() -> PathBuf {
    PathBuf::from("results")
}
fn default_variants() -> Vec<String> {
    vec!["DE".into(), "QHDE".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmSection {
    pub population: usize,
    pub max_generations: usize,
    pub f_weight: f64,
    pub cr: f64,
    pub v0: f64,
    pub gamma: f64,
    pub delta_floor: f64,
    pub mu: f64,
    pub rho: RhoSchedule,
}

impl Default for AlgorithmSection {
    fn default() -> Self {
        let d = QhdeConfig::default();
        Self {
            population: d.population,
            max_generations: d.max_generations,
            f_weight: d.de.f_weight,
            cr: d.de.cr,
            v0: d.tunneling.v0,
            gamma: d.tunneling.gamma,
            delta_floor: d.tunneling.delta_floor,
            mu: DEFAULT_MU,
            rho: d.perturb.rho,
        }
    }
}

impl AlgorithmSection {
    /// Optimizer settings for one variant; seed and stream are filled in per run.
    pub fn to_config(&self, strategies: Strategies) -> QhdeConfig {
        QhdeConfig {
            population: self.population,
            max_generations: self.max_generations,
            de: DeParams {
                f_weight: self.f_weight,
                cr: self.cr,
            },
            tunneling: TunnelingParams {
                v0: self.v0,
                gamma: self.gamma,
                delta_floor: self.delta_floor,
            },
            perturb: PerturbParams { rho: self.rho },
            strategies,
            mu: self.mu,
            seed: 0,
            stream: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// The eight shifted-rotated desk functions.
    Suite { dim: usize, seed: u64 },
    /// One unshifted, unrotated function on `[-100, 100]^dim`.
    Function { name: String, dim: usize },
    /// A fully specified benchmark (shift, optional rotation, box).
    Benchmark { spec: BenchmarkSpec },
    Portfolio {
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        prices: Option<PathBuf>,
        #[serde(default)]
        assets: Option<usize>,
        #[serde(default = "default_periods")]
        periods: usize,
        #[serde(default)]
        data_seed: u64,
        #[serde(default)]
        risk_free: f64,
        #[serde(default)]
        penalties: Penalties,
        #[serde(default)]
        lower: f64,
        #[serde(default = "one")]
        upper: f64,
    },
}

fn default_periods() -> usize {
    250
}
fn one() -> f64 {
    1.0
}

impl ProblemSpec {
    pub fn synthetic_portfolio(assets: usize, data_seed: u64) -> Self {
        ProblemSpec::Portfolio {
            label: None,
            prices: None,
            assets: Some(assets),
            periods: default_periods(),
            data_seed,
            risk_free: 0.0,
            penalties: Penalties::default(),
            lower: 0.0,
            upper: 1.0,
        }
    }
}

/// A resolved problem ready to be optimized.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub space: SearchSpace,
    pub kind: ProblemKind,
}

#[derive(Debug, Clone)]
pub enum ProblemKind {
    Benchmark(BenchmarkSpec),
    Portfolio(PortfolioObjective),
}

impl Objective for Problem {
    fn evaluate(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ProblemKind::Benchmark(b) => b.evaluate(x),
            ProblemKind::Portfolio(p) => p.evaluate(x),
        }
    }

    fn sense(&self) -> Sense {
        match &self.kind {
            ProblemKind::Benchmark(b) => b.sense(),
            ProblemKind::Portfolio(p) => p.sense(),
        }
    }
}

impl CampaignConfig {
    /// 30 runs of DE and QHDE on the 10-D desk suite, population 30 for 500 generations.
    pub fn bench_default() -> Self {
        Self {
            campaign: CampaignSection {
                name: "bench".into(),
                seed: 0,
                runs: default_runs(),
                out: default_out(),
                variants: default_variants(),
            },
            algorithm: AlgorithmSection::default(),
            problems: vec![ProblemSpec::Suite { dim: 10, seed: 0 }],
        }
    }

    /// Like [`CampaignConfig::bench_default`] but over all eight variants.
    pub fn ablate_default() -> Self {
        let mut c = Self::bench_default();
        c.campaign.name = "ablate".into();
        c.campaign.variants = Strategies::ALL.iter().map(Strategies::label).collect();
        c
    }

    /// DE and QHDE on a synthetic 20-asset market, population 50 for 100 generations.
    pub fn portfolio_default() -> Self {
        Self {
            campaign: CampaignSection {
                name: "portfolio".into(),
                ..Self::bench_default().campaign
            },
            algorithm: AlgorithmSection {
                population: 50,
                max_generations: 100,
                ..AlgorithmSection::default()
            },
            problems: vec![ProblemSpec::synthetic_portfolio(20, 0)],
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| QhdeError::Config(format!("campaign file: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QhdeError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| QhdeError::Config(format!("serializing campaign: {e}")))
    }

    pub fn variants(&self) -> Result<Vec<Strategies>> {
        let parsed = self
            .campaign
            .variants
            .iter()
            .map(|l| l.parse::<Strategies>())
            .collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for v in &parsed {
            if !seen.insert(*v) {
                return Err(QhdeError::config(format!("variant {v} listed twice")));
            }
        }
        Ok(parsed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.campaign.runs < 1 {
            return Err(QhdeError::config("runs must be at least 1"));
        }
        if self.problems.is_empty() {
            return Err(QhdeError::config("campaign has no problems"));
        }
        let variants = self.variants()?;
        if variants.is_empty() {
            return Err(QhdeError::config("campaign has no variants"));
        }
        for v in variants {
            self.algorithm.to_config(v).validate()?;
        }
        Ok(())
    }

    /// Expand suites and load price data. Labels are unique and file-name safe.
    pub fn resolve_problems(&self) -> Result<Vec<Problem>> {
        let mut out = Vec::new();
        for (k, spec) in self.problems.iter().enumerate() {
            match spec {
                ProblemSpec::Suite { dim, seed } => {
                    for b in desk_suite(*dim, *seed)? {
                        out.push(benchmark_problem(b));
                    }
                }
                ProblemSpec::Function { name, dim } => {
                    let f = BenchmarkFunction::from_name(name)?;
                    out.push(benchmark_problem(BenchmarkSpec::plain(f, *dim)?));
                }
                ProblemSpec::Benchmark { spec } => {
                    spec.validate()?;
                    out.push(benchmark_problem(spec.clone()));
                }
                ProblemSpec::Portfolio {
                    label,
                    prices,
                    assets,
                    periods,
                    data_seed,
                    risk_free,
                    penalties,
                    lower,
                    upper,
                } => {
                    let matrix = match (prices, assets) {
                        (Some(path), None) => PriceMatrix::read_csv_path(path)?,
                        (None, Some(m)) => {
                            SyntheticMarket::new(*m, *data_seed)?.prices(*periods)?
                        }
                        _ => {
                            return Err(QhdeError::config(format!(
                                "portfolio problem {k} needs exactly one of `prices` or `assets`"
                            )))
                        }
                    };
                    let model = estimate_model(&matrix, *risk_free, *penalties)?;
                    let m = model.assets();
                    let label = label.clone().unwrap_or_else(|| match prices {
                        Some(p) => format!(
                            "portfolio-{}",
                            p.file_stem().and_then(|s| s.to_str()).unwrap_or("prices")
                        ),
                        None => format!("portfolio-m{m}-s{data_seed}"),
                    });
                    out.push(Problem {
                        label: sanitize(&label),
                        space: SearchSpace::uniform(m, *lower, *upper)?,
                        kind: ProblemKind::Portfolio(PortfolioObjective::new(model)),
                    });
                }
            }
        }
        let mut seen = HashSet::new();
        for p in &out {
            if !seen.insert(p.label.clone()) {
                return Err(QhdeError::config(format!(
                    "problem label {} is not unique",
                    p.label
                )));
            }
        }
        Ok(out)
    }
}

fn benchmark_problem(spec: BenchmarkSpec) -> Problem {
    Problem {
        label: spec.label(),
        space: spec.space.clone(),
        kind: ProblemKind::Benchmark(spec),
    }
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
