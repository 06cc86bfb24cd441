//! From a price CSV to optimized weights: ingest, estimate, optimize, export.
//!
//! cargo run --release --example price_csv_ingest [prices.csv]
//!
//! Without an argument a synthetic 8-asset history is generated first.

use qhde::portfolio::{
    estimate_model, portfolio_metrics, Penalties, PortfolioModel, PortfolioObjective, PriceMatrix,
    SyntheticMarket,
};
use qhde::{run, QhdeConfig, SearchSpace};

fn main() -> qhde::Result<()> {
    let prices = match std::env::args().nth(1) {
        Some(path) => PriceMatrix::read_csv_path(path.as_ref())?,
        None => {
            let mut csv = Vec::new();
            SyntheticMarket::new(8, 11)?
                .prices(250)?
                .write_csv(&mut csv)?;
            println!(
                "{}",
                String::from_utf8_lossy(&csv)
                    .lines()
                    .take(3)
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            println!("...");
            PriceMatrix::read_csv(csv.as_slice())?
        }
    };
    println!(
        "{} assets x {} observations",
        prices.assets(),
        prices.periods()
    );

    let model = estimate_model(&prices, 0.0, Penalties::default())?;
    // the text form reproduces the model bit for bit
    let model = PortfolioModel::from_text(&model.to_text())?;

    let space = SearchSpace::uniform(model.assets(), 0.0, 1.0)?;
    let cfg = QhdeConfig {
        population: 50,
        max_generations: 100,
        ..QhdeConfig::default()
    };
    let objective = PortfolioObjective::new(model);
    let record = run(&objective, &space, &cfg)?;
    let m = portfolio_metrics(&record.best_position, &objective.model);
    println!(
        "F(E) = {:.4}  Sharpe = {:.4}  S(E) = {:.6}",
        m.objective, m.sharpe, m.allocation
    );
    for (ticker, w) in prices.tickers().iter().zip(&record.best_position) {
        println!("  {ticker}: {w:.4}");
    }
    Ok(())
}
