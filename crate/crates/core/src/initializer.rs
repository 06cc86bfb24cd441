//! Population initialization: good point set, chaotic reverse learning and
//! merge-and-select.
//!
//! The good point set places point `k` at `frac(r_j * k)` in each unit
//! coordinate, where `r_j = frac(2 cos(2 pi j / p))` and `p` is the smallest
//! prime with `(p - 3) / 2 >= dim`. Each point is then mirrored through a
//! logistic-map chaotic factor `g` as `g * (ub - lb) - x`, and the best half of
//! the merged pool becomes the initial population.

use std::f64::consts::PI;

use crate::error::{QhdeError, Result};
use crate::objective::Objective;
use crate::random::RandomSource;
use crate::solution::{CandidateSolution, Population};
use crate::space::SearchSpace;

/// Default logistic coefficient, inside the chaotic regime of `(2, 4)`.
pub const DEFAULT_MU: f64 = 3.99;

/// Generators of a good point set for `n` points in `s` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPointParams {
    pub n: usize,
    pub s: usize,
    pub prime: u64,
    pub generators: Vec<f64>,
}

impl GoodPointParams {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(QhdeError::contract(
                "good point set needs at least one point and one dimension",
            ));
        }
        let prime = smallest_good_prime(s);
        let generators = (1..=s)
            .map(|i| frac(2.0 * (2.0 * PI * i as f64 / prime as f64).cos()))
            .collect();
        Ok(Self {
            n,
            s,
            prime,
            generators,
        })
    }

    /// Point `k` (1-based) of the set in the unit cube.
    pub fn unit_point(&self, k: usize) -> Vec<f64> {
        self.generators.iter().map(|r| frac(r * k as f64)).collect()
    }
}

/// `v - floor(v)`, in `[0, 1)` for negative inputs too.
fn frac(v: f64) -> f64 {
    let f = v - v.floor();
    // v slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p` with `(p - 3) / 2 >= s`.
pub fn smallest_good_prime(s: usize) -> u64 {
    let mut p = 2 * s as u64 + 3;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// `n` good points mapped into `space`.
pub fn good_point_set(n: usize, space: &SearchSpace) -> Result<Vec<Vec<f64>>> {
    let params = GoodPointParams::new(n, space.dim())?;
    Ok((1..=n)
        .map(|k| {
            let mut x: Vec<f64> = params
                .unit_point(k)
                .iter()
                .enumerate()
                .map(|(j, u)| space.lower()[j] + space.width(j) * u)
                .collect();
            space.clamp_in_place(&mut x);
            x
        })
        .collect())
}

/// Logistic-map state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosState {
    pub mu: f64,
    pub g: f64,
}

const FIXED_POINT_GUARD: f64 = 1e-3;

impl ChaosState {
    /// A fresh orbit with `g` drawn from `(0.1, 0.9)` away from 0.25, 0.5 and 0.75.
    pub fn seeded(mu: f64, rng: &mut RandomSource) -> Result<Self> {
        if !(mu > 2.0 && mu < 4.0 + f64::EPSILON) {
            return Err(QhdeError::config(format!(
                "logistic coefficient {mu} outside (2, 4]"
            )));
        }
        Ok(Self {
            mu,
            g: draw_chaos_seed(rng),
        })
    }

    /// Advance one step, reseeding if the orbit left `(0, 1)`.
    ///
    /// Returns `true` when the orbit degenerated and was reseeded.
    pub fn advance(&mut self, rng: &mut RandomSource) -> bool {
        let next = logistic_map(self.mu, self.g);
        if next > 0.0 && next < 1.0 {
            self.g = next;
            false
        } else {
            self.g = draw_chaos_seed(rng);
            true
        }
    }
}

fn draw_chaos_seed(rng: &mut RandomSource) -> f64 {
    loop {
        let g = rng.uniform_in(0.1, 0.9);
        if [0.25, 0.5, 0.75]
            .iter()
            .all(|p| (g - p).abs() > FIXED_POINT_GUARD)
        {
            return g;
        }
    }
}

/// One application of `g -> mu * g * (1 - g)`.
pub fn logistic_map(mu: f64, g: f64) -> f64 {
    mu * g * (1.0 - g)
}

/// Chaotic opposite of `x`: `g * (ub - lb) - x`, clamped to the box.
pub fn reverse_learning(x: &[f64], g: f64, space: &SearchSpace) -> Result<Vec<f64>> {
    space.check_len(x)?;
    let mut out: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(j, xj)| g * space.width(j) - xj)
        .collect();
    space.clamp_in_place(&mut out);
    Ok(out)
}

/// Build the initial population.
///
/// With `enabled`, the `n` good points and their `n` chaotic opposites are
/// evaluated and the best `n` of the merged pool are kept (stable, so ties go
/// to the lower pool index). Otherwise `n` uniform points are drawn, member by
/// member and dimension by dimension.
pub fn initialize_population<O: Objective + ?Sized>(
    n: usize,
    space: &SearchSpace,
    objective: &O,
    rng: &mut RandomSource,
    enabled: bool,
    mu: f64,
) -> Result<Population> {
    if n < 2 {
        return Err(QhdeError::config("population needs at least two members"));
    }
    if !enabled {
        let members = (0..n)
            .map(|_| {
                let x = (0..space.dim())
                    .map(|j| space.lower()[j] + space.width(j) * rng.uniform())
                    .collect();
                CandidateSolution::evaluate(x, objective)
            })
            .collect();
        return Ok(Population::new(members));
    }

    let good = good_point_set(n, space)?;
    let mut chaos = ChaosState::seeded(mu, rng)?;
    let mut opposites = Vec::with_capacity(n);
    for x in &good {
        chaos.advance(rng);
        opposites.push(reverse_learning(x, chaos.g, space)?);
    }

    let merged = Population::new(
        good.into_iter()
            .chain(opposites)
            .map(|x| CandidateSolution::evaluate(x, objective))
            .collect(),
    );
    let order = merged.ranked_indices()?;
    let mut pool: Vec<Option<CandidateSolution>> = merged.members.into_iter().map(Some).collect();
    let members = order
        .into_iter()
        .take(n)
        .map(|i| pool[i].take().expect("indices are unique"))
        .collect();
    Ok(Population::new(members))
}

/// Centered L2 discrepancy of a point set in the unit cube (lower is more uniform).
pub fn centered_l2_discrepancy(points: &[Vec<f64>]) -> f64 {
    let n = points.len() as f64;
    let s = points.first().map_or(0, Vec::len) as i32;
    let dev = |u: f64| (u - 0.5).abs();
    let single: f64 = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|&u| 1.0 + 0.5 * dev(u) - 0.5 * dev(u) * dev(u))
                .product::<f64>()
        })
        .sum();
    let mut pairs = 0.0;
    for p in points {
        for q in points {
            pairs += p
                .iter()
                .zip(q)
                .map(|(&u, &v)| 1.0 + 0.5 * dev(u) + 0.5 * dev(v) - 0.5 * (u - v).abs())
                .product::<f64>();
        }
    }
    let squared = (13.0f64 / 12.0).powi(s) - 2.0 / n * single + pairs / (n * n);
    squared.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::FnObjective;

    // frac(k * frac(2 cos(2 pi / 5))) for k = 1..5, 50-digit reference values.
    #[allow(clippy::excessive_precision)]
    const S1_N5: [f64; 5] = [
        0.618_033_988_749_894_848_204_586_834_365_638,
        0.236_067_977_499_789_696_409_173_668_731_276,
        0.854_101_966_249_684_544_613_760_503_096_914,
        0.472_135_954_999_579_392_818_347_337_462_552,
        0.090_169_943_749_474_241_022_934_171_828_190,
    ];

    #[test]
    fn one_dimensional_set_matches_reference() {
        let unit = SearchSpace::uniform(1, 0.0, 1.0).unwrap();
        let pts = good_point_set(5, &unit).unwrap();
        assert_eq!(GoodPointParams::new(5, 1).unwrap().prime, 5);
        for (p, want) in pts.iter().zip(S1_N5) {
            assert!((p[0] - want).abs() < 1e-14, "{} vs {}", p[0], want);
        }
        let single = good_point_set(1, &unit).unwrap();
        assert!((single[0][0] - S1_N5[0]).abs() < 1e-15);
    }

    #[test]
    fn prime_choice_matches_exhaustive_scan() {
        let scan = |s: usize| {
            (2u64..)
                .find(|&p| is_prime(p) && p >= 3 && (p - 3) / 2 >= s as u64)
                .unwrap()
        };
        assert_eq!(smallest_good_prime(3), 11);
        for s in 1..60 {
            assert_eq!(smallest_good_prime(s), scan(s), "s = {s}");
        }
    }

    #[test]
    fn negative_cosines_wrap_into_unit_interval() {
        // 2 cos(4 pi / 7) < 0; its floor-based fractional part is 0.5549...
        let p = GoodPointParams::new(3, 2).unwrap();
        assert_eq!(p.prime, 7);
        assert!((p.generators[0] - 0.246_979_603_717_467_06).abs() < 1e-14);
        assert!((p.generators[1] - 0.554_958_132_087_371_2).abs() < 1e-14);
        assert!(p.generators.iter().all(|r| (0.0..1.0).contains(r)));
    }

    #[test]
    fn points_are_mapped_into_bounds() {
        let space = SearchSpace::new(vec![-5.0, 10.0, 0.0], vec![5.0, 20.0, 1e-3]).unwrap();
        for x in good_point_set(50, &space).unwrap() {
            assert!(space.contains(&x));
        }
    }

    #[test]
    fn logistic_examples() {
        assert!((logistic_map(3.99, 0.2) - 0.6384).abs() < 1e-15);
        assert_eq!(logistic_map(4.0, 0.75), 0.75);
        assert!((logistic_map(3.99, 0.6384) - 0.921_073_305_6).abs() < 1e-12);
    }

    #[test]
    fn degenerate_orbit_is_reseeded() {
        let mut rng = RandomSource::new(1, 0);
        let mut state = ChaosState { mu: 4.0, g: 0.5 };
        // 4 * 0.5 * 0.5 = 1, outside the open interval
        assert!(state.advance(&mut rng));
        assert!(state.g > 0.1 && state.g < 0.9);
        for p in [0.25, 0.5, 0.75] {
            assert!((state.g - p).abs() > FIXED_POINT_GUARD);
        }
    }

    #[test]
    fn orbit_stays_in_open_unit_interval() {
        let mut rng = RandomSource::new(9, 0);
        let mut state = ChaosState::seeded(DEFAULT_MU, &mut rng).unwrap();
        for _ in 0..100_000 {
            state.advance(&mut rng);
            assert!(state.g > 0.0 && state.g < 1.0);
        }
        assert!(ChaosState::seeded(1.5, &mut rng).is_err());
    }

    #[test]
    fn reverse_learning_examples() {
        let unit = SearchSpace::uniform(1, 0.0, 1.0).unwrap();
        assert!((reverse_learning(&[0.3], 0.5, &unit).unwrap()[0] - 0.2).abs() < 1e-15);
        assert_eq!(reverse_learning(&[0.9], 0.1, &unit).unwrap(), vec![0.0]);
        let square = SearchSpace::uniform(2, 0.0, 4.0).unwrap();
        assert_eq!(
            reverse_learning(&[2.0, 2.0], 0.5, &square).unwrap(),
            vec![0.0, 0.0]
        );
        // g = 1 mirrors through the box centre when lb = 0
        assert_eq!(
            reverse_learning(&[2.0, 2.0], 1.0, &square).unwrap(),
            vec![2.0, 2.0]
        );
    }

    fn sphere() -> FnObjective<impl Fn(&[f64]) -> f64 + Sync> {
        FnObjective::minimize(|x: &[f64]| x.iter().map(|v| v * v).sum())
    }

    #[test]
    fn enabled_init_keeps_best_half_of_merged_pool() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let obj = sphere();
        let mut rng = RandomSource::new(3, 0);
        let pop = initialize_population(4, &space, &obj, &mut rng, true, DEFAULT_MU).unwrap();

        // Rebuild the merged pool independently with the same draws.
        let mut rng = RandomSource::new(3, 0);
        let good = good_point_set(4, &space).unwrap();
        let mut chaos = ChaosState::seeded(DEFAULT_MU, &mut rng).unwrap();
        let mut pool: Vec<f64> = good.iter().map(|x| obj.evaluate(x)).collect();
        let good_best = pool.iter().cloned().fold(f64::INFINITY, f64::min);
        for x in &good {
            chaos.advance(&mut rng);
            pool.push(obj.evaluate(&reverse_learning(x, chaos.g, &space).unwrap()));
        }
        pool.sort_by(f64::total_cmp);
        let median = 0.5 * (pool[3] + pool[4]);

        let fits = pop.fitnesses().unwrap();
        assert_eq!(fits.len(), 4);
        for f in &fits {
            assert!(*f <= median);
            assert!(*f <= pool[3]);
        }
        let best = fits.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(best <= good_best);
        assert_eq!(best, pool[0]);
    }

    #[test]
    fn disabled_init_is_reproducible_uniform() {
        let space = SearchSpace::uniform(3, -2.0, 2.0).unwrap();
        let obj = sphere();
        let a = initialize_population(
            6,
            &space,
            &obj,
            &mut RandomSource::new(5, 1),
            false,
            DEFAULT_MU,
        )
        .unwrap();
        let b = initialize_population(
            6,
            &space,
            &obj,
            &mut RandomSource::new(5, 1),
            false,
            DEFAULT_MU,
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.members.iter().all(|m| space.contains(&m.position)));
    }

    #[test]
    fn discrepancy_matches_scipy_reference() {
        // scipy.stats.qmc.discrepancy(method="CD") ** 0.5
        let five = vec![
            vec![0.1, 0.2],
            vec![0.4, 0.9],
            vec![0.75, 0.3],
            vec![0.5, 0.5],
            vec![0.95, 0.05],
        ];
        assert!((centered_l2_discrepancy(&five) - 0.198_205_666_193_251_1).abs() < 1e-12);
        let two = vec![vec![0.3], vec![0.8]];
        assert!((centered_l2_discrepancy(&two) - 0.152_752_523_165_194_25).abs() < 1e-12);
    }

    #[test]
    fn failed_evaluations_stay_eligible() {
        let space = SearchSpace::uniform(1, 0.0, 1.0).unwrap();
        let obj = FnObjective::minimize(|_: &[f64]| f64::NAN);
        let pop = initialize_population(
            3,
            &space,
            &obj,
            &mut RandomSource::new(0, 0),
            true,
            DEFAULT_MU,
        )
        .unwrap();
        assert_eq!(pop.len(), 3);
        assert!(pop.fitnesses().unwrap().iter().all(|f| *f == f64::INFINITY));
        assert!(initialize_population(
            1,
            &space,
            &obj,
            &mut RandomSource::new(0, 0),
            true,
            DEFAULT_MU
        )
        .is_err());
    }
}
