use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qhde::harness::{run_campaign, CampaignConfig, ProblemSpec};
use qhde::portfolio::SyntheticMarket;
use qhde::Strategies;

#[derive(Parser)]
#[command(name = "qhde", version, about = "QHDE optimizer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark campaign on the desk suite (or the problems of --config).
    Bench {
        #[command(flatten)]
        common: Common,
        /// Suite dimension when no config file is given.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Portfolio campaign on a price CSV or a synthetic market.
    Portfolio {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        market: Market,
    },
    /// All eight strategy combinations on the desk suite.
    Ablate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Write a synthetic price CSV.
    SynthData {
        #[arg(long, default_value_t = 20)]
        assets: usize,
        #[arg(long, default_value_t = 250)]
        periods: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Campaign TOML file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Variant label (DE, QHDE1 .. QHDE23, QHDE); repeatable.
    #[arg(long = "variant")]
    variants: Vec<String>,
}

#[derive(Args)]
struct Market {
    /// Price CSV (`date,TICKER,...`).
    #[arg(long, conflicts_with = "assets")]
    prices: Option<PathBuf>,
    /// Synthetic market size.
    #[arg(long)]
    assets: Option<usize>,
    #[arg(long)]
    periods: Option<usize>,
    #[arg(long)]
    risk_free: Option<f64>,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
    #[arg(long)]
    beta3: Option<f64>,
    #[arg(long)]
    beta4: Option<f64>,
}

fn base(common: &Common, default: CampaignConfig) -> qhde::Result<CampaignConfig> {
    let mut cfg = match &common.config {
        Some(path) => CampaignConfig::load(path)?,
        None => default,
    };
    let c = &mut cfg.campaign;
    if let Some(v) = common.seed {
        c.seed = v;
    }
    if let Some(v) = common.runs {
        c.runs = v;
    }
    if let Some(v) = &common.out {
        c.out = v.clone();
    }
    if !common.variants.is_empty() {
        c.variants = common.variants.clone();
    }
    if let Some(v) = common.pop {
        cfg.algorithm.population = v;
    }
    if let Some(v) = common.iters {
        cfg.algorithm.max_generations = v;
    }
    Ok(cfg)
}

fn set_suite_dim(cfg: &mut CampaignConfig, dim: Option<usize>) {
    if let Some(d) = dim {
        for p in &mut cfg.problems {
            if let ProblemSpec::Suite { dim, .. } | ProblemSpec::Function { dim, .. } = p {
                *dim = d;
            }
        }
    }
}

fn apply_market(cfg: &mut CampaignConfig, m: &Market) {
    if m.prices.is_some() || m.assets.is_some() {
        cfg.problems
            .retain(|p| !matches!(p, ProblemSpec::Portfolio { .. }));
        if cfg.problems.is_empty() {
            cfg.problems.push(ProblemSpec::synthetic_portfolio(20, 0));
        }
    }
    for p in &mut cfg.problems {
        if let ProblemSpec::Portfolio {
            prices,
            assets,
            periods,
            risk_free,
            penalties,
            ..
        } = p
        {
            if let Some(path) = &m.prices {
                *prices = Some(path.clone());
                *assets = None;
            }
            if let Some(a) = m.assets {
                *assets = Some(a);
                *prices = None;
            }
            if let Some(v) = m.periods {
                *periods = v;
            }
            if let Some(v) = m.risk_free {
                *risk_free = v;
            }
            for (flag, slot) in [
                (m.beta1, &mut penalties.beta1),
                (m.beta2, &mut penalties.beta2),
                (m.beta3, &mut penalties.beta3),
                (m.beta4, &mut penalties.beta4),
            ] {
                if let Some(v) = flag {
                    *slot = v;
                }
            }
        }
    }
}

fn campaign(cfg: CampaignConfig) -> qhde::Result<()> {
    let run = run_campaign(&cfg)?;
    let s = &run.summary;
    eprintln!(
        "{}: {} problems x {} variants x {} runs -> {}",
        s.name,
        s.problems.len(),
        s.variants.len(),
        s.runs,
        cfg.campaign.out.display()
    );
    for r in &s.friedman {
        println!("{:<8} average rank {:.3}", r.variant, r.average_rank);
    }
    Ok(())
}

fn dispatch(cli: Cli) -> qhde::Result<()> {
    match cli.command {
        Command::Bench { common, dim } => {
            let mut cfg = base(&common, CampaignConfig::bench_default())?;
            set_suite_dim(&mut cfg, dim);
            campaign(cfg)
        }
        Command::Ablate { common, dim } => {
            let mut cfg = base(&common, CampaignConfig::ablate_default())?;
            if common.variants.is_empty() {
                cfg.campaign.variants = Strategies::ALL.iter().map(Strategies::label).collect();
            }
            set_suite_dim(&mut cfg, dim);
            campaign(cfg)
        }
        Command::Portfolio { common, market } => {
            let mut cfg = base(&common, CampaignConfig::portfolio_default())?;
            apply_market(&mut cfg, &market);
            campaign(cfg)
        }
        Command::SynthData {
            assets,
            periods,
            seed,
            out,
        } => {
            let prices = SyntheticMarket::new(assets, seed)?.prices(periods)?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| qhde::QhdeError::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    prices.write_csv(std::io::BufWriter::new(file))
                }
                None => prices.write_csv(std::io::stdout().lock()),
            }
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qhde: {e}");
            ExitCode::FAILURE
        }
    }
}
