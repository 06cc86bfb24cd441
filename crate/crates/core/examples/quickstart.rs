//! Minimize a user-supplied function and a built-in benchmark.
//!
//! cargo run --release --example quickstart

use qhde::{run, BenchmarkFunction, BenchmarkSpec, FnObjective, QhdeConfig, SearchSpace};

fn main() -> qhde::Result<()> {
    // Any closure works as an objective.
    let himmelblau = FnObjective::minimize(|x: &[f64]| {
        (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2)
    });
    let space = SearchSpace::uniform(2, -5.0, 5.0)?;
    let cfg = QhdeConfig {
        max_generations: 200,
        ..QhdeConfig::default()
    }
    .with_seed(7, 0);
    let record = run(&himmelblau, &space, &cfg)?;
    println!(
        "himmelblau: f = {:.3e} at {:?} after {} evaluations",
        record.reported_best(),
        record.best_position,
        record.total_evaluations()
    );

    let sphere = BenchmarkSpec::plain(BenchmarkFunction::Sphere, 2)?;
    let record = run(&sphere, &sphere.space, &QhdeConfig::default())?;
    println!(
        "sphere-d2: f = {:.3e} ({:?})",
        record.best_fitness, record.wall_time
    );

    // Maximization: the record reports in the objective's own sense.
    let bump = FnObjective::maximize(|x: &[f64]| (-(x[0] - 1.0).powi(2)).exp());
    let record = run(&bump, &SearchSpace::uniform(1, -3.0, 3.0)?, &cfg)?;
    println!(
        "bump: max = {:.6} at x = {:.4}",
        record.reported_best(),
        record.best_position[0]
    );
    Ok(())
}
