//! How evenly the good point set covers the unit cube compared with uniform
//! random sampling, measured by centered-L2 discrepancy.
//!
//! cargo run --release --example init_quality

use qhde::initializer::{centered_l2_discrepancy, good_point_set, GoodPointParams};
use qhde::{RandomSource, SearchSpace};

fn main() -> qhde::Result<()> {
    println!(
        "{:>3} {:>4} {:>6} {:>12} {:>14}",
        "s", "n", "prime", "good points", "uniform mean"
    );
    for s in [1, 2, 3, 5, 10] {
        let unit = SearchSpace::uniform(s, 0.0, 1.0)?;
        for n in [30, 50, 100] {
            let good = centered_l2_discrepancy(&good_point_set(n, &unit)?);
            let uniform = (0..100u64)
                .map(|seed| {
                    let mut rng = RandomSource::new(seed, 0);
                    let pts: Vec<Vec<f64>> = (0..n)
                        .map(|_| (0..s).map(|_| rng.uniform()).collect())
                        .collect();
                    centered_l2_discrepancy(&pts)
                })
                .sum::<f64>()
                / 100.0;
            let prime = GoodPointParams::new(n, s)?.prime;
            println!("{s:>3} {n:>4} {prime:>6} {good:>12.5} {uniform:>14.5}");
        }
    }
    Ok(())
}
