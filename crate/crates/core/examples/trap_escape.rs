//! Tunneling out of a local basin: a 1-D double well with the whole population
//! started around the shallower floor, run with and without tunneling.
//!
//! cargo run --release --example trap_escape [seeds] [radius] [separation] [depth]

use qhde::benchmarks::trap_landscape;
use qhde::{run_from_positions, QhdeConfig, RandomSource, Strategies};

fn main() -> qhde::Result<()> {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map_or(50, |a| a.parse().expect("seed count"));
    let radius: f64 = args.next().map_or(0.2, |a| a.parse().expect("radius"));
    let sep: f64 = args.next().map_or(1.0, |a| a.parse().expect("separation"));
    let depth: f64 = args.next().map_or(0.3, |a| a.parse().expect("depth"));

    let well = trap_landscape(sep, depth, -5.0, 5.0)?;
    println!(
        "double well: global floor at {}, trap floor at 0 (+{depth})",
        -sep
    );

    let variants = [
        ("QHDE  ", Strategies::QHDE),
        ("QHDE13", Strategies::new(true, false, true)),
        ("QHDE2 ", Strategies::new(false, true, false)),
        ("DE    ", Strategies::DE),
    ];
    for (name, strategies) in variants {
        let mut escaped = 0;
        for seed in 0..seeds {
            let cfg = QhdeConfig {
                max_generations: 200,
                ..QhdeConfig::default()
            }
            .with_strategies(strategies)
            .with_seed(seed, 0);
            // starting points come from their own stream so every variant shares them
            let mut start_rng = RandomSource::new(seed, 1_000);
            let start: Vec<Vec<f64>> = (0..cfg.population)
                .map(|_| vec![start_rng.uniform_in(-radius, radius)])
                .collect();
            let record = run_from_positions(&well, &well.space, &cfg, start)?;
            if record.best_fitness <= 1e-2 {
                escaped += 1;
            }
        }
        println!(
            "{name}: {escaped}/{seeds} runs reached the global floor ({:.0}%)",
            100.0 * escaped as f64 / seeds as f64
        );
    }
    Ok(())
}
