//! DE against QHDE on synthetic 20- and 40-asset markets, reporting the
//! median penalized objective F(E), Sharpe ratio and allocation sum S(E).
//!
//! cargo run --release --example portfolio_synthetic [runs]

use qhde::harness::{execute_campaign, CampaignConfig, ProblemSpec};

fn main() -> qhde::Result<()> {
    let runs = std::env::args()
        .nth(1)
        .map_or(30, |a| a.parse().expect("runs"));
    let mut cfg = CampaignConfig::portfolio_default();
    cfg.campaign.runs = runs;
    cfg.problems = vec![
        ProblemSpec::synthetic_portfolio(20, 1),
        ProblemSpec::synthetic_portfolio(40, 2),
    ];
    let summary = execute_campaign(&cfg)?.summary;
    println!(
        "{:<22}{:<8}{:>12}{:>12}{:>12}{:>12}",
        "problem", "variant", "F(E)", "Sr", "S(E)", "|S(E)-1|"
    );
    for e in &summary.results {
        let m = e.portfolio.as_ref().expect("portfolio problem");
        println!(
            "{:<22}{:<8}{:>12.4}{:>12.4}{:>12.6}{:>12.2e}",
            e.problem,
            e.variant,
            m.median_objective,
            m.median_sharpe,
            m.median_allocation,
            m.median_allocation_error
        );
    }
    Ok(())
}
