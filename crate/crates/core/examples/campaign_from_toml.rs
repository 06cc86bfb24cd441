//! Drive a full campaign from a TOML description and write its artifacts.
//!
//! cargo run --release --example campaign_from_toml [out-dir]

use qhde::harness::{run_campaign, CampaignConfig};

const CAMPAIGN: &str = r#"
[campaign]
name = "mixed"
seed = 2024
runs = 5
variants = ["DE", "QHDE2", "QHDE"]

[algorithm]
population = 30
max_generations = 150

[[problems]]
kind = "function"
name = "rastrigin"
dim = 8

[[problems]]
kind = "suite"
dim = 5
seed = 1

[[problems]]
kind = "portfolio"
assets = 10
data_seed = 3
"#;

fn main() -> qhde::Result<()> {
    let mut cfg = CampaignConfig::from_toml_str(CAMPAIGN)?;
    cfg.campaign.out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("qhde-mixed"), Into::into);
    let run = run_campaign(&cfg)?;
    let s = &run.summary;
    for e in &s.results {
        println!(
            "{:<22}{:<7} median {:>11.4e}  best {:>11.4e}",
            e.problem, e.variant, e.stats.median, e.stats.best
        );
    }
    for r in &s.friedman {
        println!("{:<7} average rank {:.3}", r.variant, r.average_rank);
    }
    println!("artifacts in {}", cfg.campaign.out.display());
    Ok(())
}
