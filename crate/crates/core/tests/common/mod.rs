//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use qhde::portfolio::{penalized_objective, sharpe_ratio, PortfolioModel};
use qhde::{BenchmarkSpec, Objective};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook DE/rand/1/bin written straight against the ChaCha8 generator;
/// returns the best-so-far trace.
pub fn plain_de(f: &BenchmarkSpec, n: usize, gens: usize, fw: f64, cr: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let d = f.dim();
    let (lo, hi) = (f.space.lower().to_vec(), f.space.upper().to_vec());
    let mut pop: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..d)
                .map(|j| lo[j] + (hi[j] - lo[j]) * rng.random::<f64>())
                .collect()
        })
        .collect();
    let mut fit: Vec<f64> = pop.iter().map(|x| f.evaluate(x)).collect();
    let best = |fit: &[f64]| fit.iter().copied().fold(f64::INFINITY, f64::min);
    let mut trace = vec![best(&fit)];
    let mut best_so_far = trace[0];
    for _ in 0..gens {
        let old = pop.clone();
        for i in 0..n {
            let mut r = [0usize; 3];
            for k in 0..3 {
                r[k] = loop {
                    let c = rng.random_range(0..n);
                    if c != i && !r[..k].contains(&c) {
                        break c;
                    }
                };
            }
            let jr = rng.random_range(0..d);
            let mut u = old[i].clone();
            for j in 0..d {
                let v = (old[r[0]][j] + fw * (old[r[1]][j] - old[r[2]][j])).clamp(lo[j], hi[j]);
                if rng.random::<f64>() < cr || j == jr {
                    u[j] = v;
                }
            }
            let fu = f.evaluate(&u);
            if fu <= fit[i] {
                pop[i] = u;
                fit[i] = fu;
            }
        }
        best_so_far = best_so_far.min(best(&fit));
        trace.push(best_so_far);
    }
    trace
}

/// Grid over `w1` in `[0, 1]` with `w2 = 1 - w1`; returns the index
/// maximizing `score`, first index on ties.
pub fn grid_argmax(points: usize, score: impl Fn(&[f64]) -> f64) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..points {
        let w1 = k as f64 / (points - 1) as f64;
        let s = score(&[w1, 1.0 - w1]);
        if s > best.1 {
            best = (k, s);
        }
    }
    best.0
}

pub fn grid_argmax_penalized(model: &PortfolioModel, points: usize) -> usize {
    grid_argmax(points, |w| penalized_objective(w, model))
}

pub fn grid_argmax_sharpe(model: &PortfolioModel, points: usize) -> usize {
    grid_argmax(points, |w| {
        sharpe_ratio(w, model).unwrap_or(f64::NEG_INFINITY)
    })
}
