//! Portfolio selection: price ingestion, model estimation and the penalized
//! Sharpe objective.

mod model;
mod prices;
mod synth;

pub use model::{
    constraint_sum, estimate_model, frontier_objective, mean_variance_risk, penalized_objective,
    portfolio_metrics, sharpe_ratio, Penalties, PortfolioMetrics, PortfolioModel,
    PortfolioObjective, DEGENERATE_SHARPE,
};
pub use prices::PriceMatrix;
pub use synth::SyntheticMarket;
