//! Seeded synthetic markets with a known return distribution.

use chrono::{Datelike, Days, NaiveDate, Weekday};
use nalgebra::{DMatrix, DVector};

use super::prices::PriceMatrix;
use crate::error::{QhdeError, Result};
use crate::random::RandomSource;

/// Multivariate-normal daily returns with a one-factor correlation structure.
///
/// Asset `i` has mean return `mean_low + (mean_high - mean_low) * i / (m - 1)`
/// and volatility drawn uniformly from `[vol_low, vol_high]`; correlations come
/// from random factor loadings in `[-0.3, 0.9]`.
#[derive(Debug, Clone)]
pub struct SyntheticMarket {
    means: DVector<f64>,
    covariance: DMatrix<f64>,
    chol: DMatrix<f64>,
    seed: u64,
}

impl SyntheticMarket {
    pub fn new(assets: usize, seed: u64) -> Result<Self> {
        Self::with_ranges(assets, seed, (2e-4, 1.2e-3), (0.01, 0.03))
    }

    pub fn with_ranges(
        assets: usize,
        seed: u64,
        (mean_low, mean_high): (f64, f64),
        (vol_low, vol_high): (f64, f64),
    ) -> Result<Self> {
        if assets == 0 {
            return Err(QhdeError::config(
                "synthetic market needs at least one asset",
            ));
        }
        if !(vol_low > 0.0 && vol_high >= vol_low) {
            return Err(QhdeError::config("volatility range must be positive"));
        }
        // stream 1 is reserved for the structure, stream 2 for the return path
        let mut rng = RandomSource::new(seed, 1);
        let loadings: Vec<f64> = (0..assets).map(|_| rng.uniform_in(-0.3, 0.9)).collect();
        let vols: Vec<f64> = (0..assets)
            .map(|_| rng.uniform_in(vol_low, vol_high))
            .collect();
        let corr = DMatrix::from_fn(assets, assets, |i, j| {
            if i == j {
                1.0
            } else {
                loadings[i] * loadings[j]
            }
        });
        Self::from_parts(
            DVector::from_fn(assets, |i, _| {
                if assets == 1 {
                    mean_low
                } else {
                    mean_low + (mean_high - mean_low) * i as f64 / (assets - 1) as f64
                }
            }),
            DMatrix::from_fn(assets, assets, |i, j| corr[(i, j)] * vols[i] * vols[j]),
            seed,
        )
    }

    /// Explicit generator parameters. `covariance` must be positive definite.
    pub fn from_parts(means: DVector<f64>, covariance: DMatrix<f64>, seed: u64) -> Result<Self> {
        if covariance.nrows() != means.len() || covariance.ncols() != means.len() {
            return Err(QhdeError::config("covariance shape does not match means"));
        }
        let chol = covariance
            .clone()
            .cholesky()
            .ok_or_else(|| QhdeError::config("covariance is not positive definite"))?
            .l();
        Ok(Self {
            means,
            covariance,
            chol,
            seed,
        })
    }

    pub fn assets(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &DVector<f64> {
        &self.means
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// `periods` return rows drawn as `mean + L z`.
    pub fn returns(&self, periods: usize) -> Vec<Vec<f64>> {
        let m = self.assets();
        let mut rng = RandomSource::new(self.seed, 2);
        (0..periods)
            .map(|_| {
                let z = DVector::from_fn(m, |_, _| rng.normal());
                let r = &self.means + &self.chol * z;
                r.iter().copied().collect()
            })
            .collect()
    }

    /// Price history of `periods` observations starting at 100 on business
    /// days from 2024-01-02.
    pub fn prices(&self, periods: usize) -> Result<PriceMatrix> {
        if periods < 3 {
            return Err(QhdeError::config("need at least 3 observations"));
        }
        let m = self.assets();
        let mut rows = vec![vec![100.0; m]];
        for r in self.returns(periods - 1) {
            let prev = rows.last().unwrap();
            // floor at a cent so a wild draw cannot produce a non-positive price
            rows.push(
                prev.iter()
                    .zip(&r)
                    .map(|(p, x)| (p * (1.0 + x)).max(0.01))
                    .collect(),
            );
        }
        let tickers = (0..m).map(|i| format!("A{i:03}")).collect();
        PriceMatrix::new(tickers, business_days(periods), rows)
    }
}

fn business_days(n: usize) -> Vec<NaiveDate> {
    let mut day = NaiveDate::from_ymd_opt(2024, 1, 2).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
        day = day + Days::new(1);
    }
    out
}
