use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};

/// Replicate statistics of final fitness for one (problem, variant) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub median: f64,
    pub best: f64,
    pub worst: f64,
    /// Kept out of the JSON summary so reruns stay byte-identical.
    #[serde(skip)]
    pub mean_wall_seconds: f64,
}

impl SummaryStats {
    /// Statistics of minimization-sense values (`best` is the smallest).
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(QhdeError::contract("no values to summarize"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(QhdeError::contract("NaN in summarized values"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            mean,
            std,
            median: median_sorted(&sorted),
            best: sorted[0],
            worst: sorted[sorted.len() - 1],
            mean_wall_seconds: 0.0,
        })
    }
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Median of arbitrary values; NaN entries are ignored, NaN if none remain.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    median_sorted(&v)
}

/// Average Friedman rank per variant; `scores[p][v]`, lower is better.
///
/// Tied scores share the mean of the rank positions they occupy.
pub fn friedman_ranks(scores: &[Vec<f64>]) -> Result<Vec<f64>> {
    let problems = scores.len();
    if problems == 0 {
        return Err(QhdeError::contract(
            "friedman ranks need at least one problem",
        ));
    }
    let v = scores[0].len();
    if v < 2 {
        return Err(QhdeError::contract(
            "friedman ranks need at least two variants",
        ));
    }
    let mut total = vec![0.0; v];
    for (p, row) in scores.iter().enumerate() {
        if row.len() != v {
            return Err(QhdeError::contract(format!(
                "problem {p} has {} scores, expected {v}",
                row.len()
            )));
        }
        if row.iter().any(|s| s.is_nan()) {
            return Err(QhdeError::contract(format!("NaN score for problem {p}")));
        }
        let mut order: Vec<usize> = (0..v).collect();
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
        let mut start = 0;
        while start < v {
            let mut end = start + 1;
            while end < v && row[order[end]] == row[order[start]] {
                end += 1;
            }
            // positions start..end hold ranks start+1..=end
            let rank = (start + 1 + end) as f64 / 2.0;
            for &i in &order[start..end] {
                total[i] += rank;
            }
            start = end;
        }
    }
    Ok(total.into_iter().map(|t| t / problems as f64).collect())
}
