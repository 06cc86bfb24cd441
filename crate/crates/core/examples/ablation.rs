//! All eight strategy combinations on the 10-D desk suite, ranked by the
//! Friedman test over per-function median final fitness.
//!
//! cargo run --release --example ablation [runs] [generations]

use qhde::harness::{execute_campaign, CampaignConfig};

fn main() -> qhde::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = CampaignConfig::ablate_default();
    cfg.campaign.runs = args.next().map_or(30, |a| a.parse().expect("runs"));
    cfg.algorithm.max_generations = args.next().map_or(500, |a| a.parse().expect("generations"));

    let started = std::time::Instant::now();
    let run = execute_campaign(&cfg)?;
    let summary = &run.summary;

    print!("{:<16}", "median");
    for v in &summary.variants {
        print!("{v:>11}");
    }
    println!();
    for p in &summary.problems {
        print!("{p:<16}");
        for v in &summary.variants {
            print!("{:>11.3e}", summary.entry(p, v).unwrap().stats.median);
        }
        println!();
    }
    print!("{:<16}", "friedman rank");
    for r in &summary.friedman {
        print!("{:>11.3}", r.average_rank);
    }
    println!();
    println!(
        "({} runs per cell, {:.1?})",
        summary.runs,
        started.elapsed()
    );
    Ok(())
}
