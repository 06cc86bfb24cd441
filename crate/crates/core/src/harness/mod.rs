//! Experiment campaigns: configuration, replicate statistics, Friedman ranks
//! and plot-ready exports.

mod campaign;
mod config;
mod stats;

pub use campaign::{
    configured_threads, convergence_file_name, execute_campaign, run_campaign, CampaignRun,
    CampaignSummary, PortfolioSummary, RankEntry, ResultEntry, SCHEMA_VERSION, THREADS_ENV,
};
pub use config::{
    AlgorithmSection, CampaignConfig, CampaignSection, Problem, ProblemKind, ProblemSpec,
};
pub use stats::{friedman_ranks, median, SummaryStats};
