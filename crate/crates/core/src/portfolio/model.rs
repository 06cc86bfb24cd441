//! Return/covariance models and the portfolio objectives built on them.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::prices::PriceMatrix;
use crate::error::{QhdeError, Result};
use crate::objective::{Objective, Sense};

/// Sharpe term used when the portfolio variance is not positive.
pub const DEGENERATE_SHARPE: f64 = -1.0e6;

/// Weights `beta1..beta4` of the penalized objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    /// Weight on the Sharpe ratio.
    pub beta1: f64,
    /// Full-allocation equality `(sum w - 1)^2`.
    pub beta2: f64,
    /// Upper bound `w_i <= 1`.
    pub beta3: f64,
    /// No short selling, `w_i >= 0`.
    pub beta4: f64,
}

impl Default for Penalties {
    fn default() -> Self {
        Self {
            beta1: 1.0,
            beta2: 100.0,
            beta3: 100.0,
            beta4: 100.0,
        }
    }
}

impl Penalties {
    pub fn validate(&self) -> Result<()> {
        let all = [self.beta1, self.beta2, self.beta3, self.beta4];
        if all.iter().any(|b| !(b.is_finite() && *b >= 0.0)) || self.beta1 <= 0.0 {
            return Err(QhdeError::config(format!(
                "penalty weights must be finite and non-negative with beta1 > 0, got {all:?}"
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            beta1: self.beta1 * c,
            beta2: self.beta2 * c,
            beta3: self.beta3 * c,
            beta4: self.beta4 * c,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioModel {
    alpha: DVector<f64>,
    q: DMatrix<f64>,
    risk_free: f64,
    penalties: Penalties,
}

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

impl PortfolioModel {
    pub fn new(
        alpha: DVector<f64>,
        q: DMatrix<f64>,
        risk_free: f64,
        penalties: Penalties,
    ) -> Result<Self> {
        let m = alpha.len();
        if m == 0 {
            return Err(QhdeError::config("portfolio model has no assets"));
        }
        if q.nrows() != m || q.ncols() != m {
            return Err(QhdeError::config(format!(
                "covariance is {}x{} for {m} assets",
                q.nrows(),
                q.ncols()
            )));
        }
        if !risk_free.is_finite() || alpha.iter().chain(q.iter()).any(|v| !v.is_finite()) {
            return Err(QhdeError::config("portfolio model has non-finite entries"));
        }
        let scale = q.amax().max(f64::MIN_POSITIVE);
        for i in 0..m {
            for j in 0..i {
                if (q[(i, j)] - q[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(QhdeError::config(format!(
                        "covariance not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let min_eig = q.clone().symmetric_eigenvalues().min();
        if min_eig < PSD_TOL {
            return Err(QhdeError::config(format!(
                "covariance not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        penalties.validate()?;
        Ok(Self {
            alpha,
            q,
            risk_free,
            penalties,
        })
    }

    pub fn assets(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn risk_free(&self) -> f64 {
        self.risk_free
    }

    pub fn penalties(&self) -> &Penalties {
        &self.penalties
    }

    pub fn with_penalties(&self, penalties: Penalties) -> Result<Self> {
        penalties.validate()?;
        Ok(Self {
            penalties,
            ..self.clone()
        })
    }

    fn check_weights(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.assets() {
            return Err(QhdeError::contract(format!(
                "{} weights for {} assets",
                w.len(),
                self.assets()
            )));
        }
        Ok(())
    }

    fn expected_return(&self, w: &[f64]) -> f64 {
        self.alpha.iter().zip(w).map(|(a, x)| a * x).sum()
    }

    fn variance(&self, w: &[f64]) -> f64 {
        let m = self.assets();
        let mut acc = 0.0;
        for i in 0..m {
            let row: f64 = (0..m).map(|j| self.q[(i, j)] * w[j]).sum();
            acc += w[i] * row;
        }
        acc
    }

    /// Serialize to the plain-text model format (see [`PortfolioModel::from_text`]).
    pub fn to_text(&self) -> String {
        let join = |it: &mut dyn Iterator<Item = f64>| {
            it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        let p = &self.penalties;
        writeln!(out, "# qhde portfolio model").unwrap();
        writeln!(out, "format = 1").unwrap();
        writeln!(out, "assets = {}", self.assets()).unwrap();
        writeln!(out, "risk_free = {}", self.risk_free).unwrap();
        writeln!(out, "beta1 = {}", p.beta1).unwrap();
        writeln!(out, "beta2 = {}", p.beta2).unwrap();
        writeln!(out, "beta3 = {}", p.beta3).unwrap();
        writeln!(out, "beta4 = {}", p.beta4).unwrap();
        writeln!(out, "alpha = {}", join(&mut self.alpha.iter().copied())).unwrap();
        writeln!(out, "q =").unwrap();
        for i in 0..self.assets() {
            writeln!(out, "{}", join(&mut self.q.row(i).iter().copied())).unwrap();
        }
        out
    }

    /// Parse the plain-text model format.
    ///
    /// ```text
    /// # comment
    /// format = 1
    /// assets = 2
    /// risk_free = 0
    /// beta1 = 1
    /// beta2 = 100
    /// beta3 = 100
    /// beta4 = 100
    /// alpha = 0.02 0.01
    /// q =
    /// 0.04 0
    /// 0 0.01
    /// ```
    ///
    /// Values are written in shortest round-trip form, so a model read back is
    /// bit-identical to the one written.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut assets = None;
        let mut risk_free = None;
        let mut betas = [None; 4];
        let mut alpha = None;
        let mut q = None;
        let num = |key: &str, v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| QhdeError::Parse(format!("model field {key}: {e}")))
        };
        let vector = |key: &str, v: &str| {
            v.split_whitespace()
                .map(|x| num(key, x))
                .collect::<Result<Vec<f64>>>()
        };
        while let Some(line) = lines.next() {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| QhdeError::Parse(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            match key {
                "format" if value.trim() == "1" => {}
                "format" => {
                    return Err(QhdeError::Parse(format!(
                        "unsupported model format {}",
                        value.trim()
                    )))
                }
                "assets" => {
                    assets = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| QhdeError::Parse(format!("model field assets: {e}")))?,
                    )
                }
                "risk_free" => risk_free = Some(num(key, value)?),
                "beta1" => betas[0] = Some(num(key, value)?),
                "beta2" => betas[1] = Some(num(key, value)?),
                "beta3" => betas[2] = Some(num(key, value)?),
                "beta4" => betas[3] = Some(num(key, value)?),
                "alpha" => alpha = Some(vector(key, value)?),
                "q" => {
                    let m = assets.ok_or_else(|| {
                        QhdeError::Parse("`assets` must precede the q matrix".into())
                    })?;
                    let mut rows = Vec::with_capacity(m * m);
                    for i in 0..m {
                        let row = lines.next().ok_or_else(|| {
                            QhdeError::Parse(format!("q matrix ends after {i} rows"))
                        })?;
                        let row = vector("q", row)?;
                        if row.len() != m {
                            return Err(QhdeError::Parse(format!(
                                "q row {i} has {} entries, expected {m}",
                                row.len()
                            )));
                        }
                        rows.extend(row);
                    }
                    q = Some(DMatrix::from_row_slice(m, m, &rows));
                }
                other => return Err(QhdeError::Parse(format!("unknown model field {other:?}"))),
            }
        }
        let missing = |name: &str| QhdeError::Parse(format!("model is missing `{name}`"));
        let m = assets.ok_or_else(|| missing("assets"))?;
        let alpha = alpha.ok_or_else(|| missing("alpha"))?;
        if alpha.len() != m {
            return Err(QhdeError::Parse(format!(
                "alpha has {} entries, expected {m}",
                alpha.len()
            )));
        }
        let [b1, b2, b3, b4] = betas;
        let penalties = Penalties {
            beta1: b1.ok_or_else(|| missing("beta1"))?,
            beta2: b2.ok_or_else(|| missing("beta2"))?,
            beta3: b3.ok_or_else(|| missing("beta3"))?,
            beta4: b4.ok_or_else(|| missing("beta4"))?,
        };
        Self::new(
            DVector::from_vec(alpha),
            q.ok_or_else(|| missing("q"))?,
            risk_free.ok_or_else(|| missing("risk_free"))?,
            penalties,
        )
    }
}

/// Sample mean returns and covariance (divisor `T - 2` over `T - 1` return rows).
pub fn estimate_model(
    prices: &PriceMatrix,
    risk_free: f64,
    penalties: Penalties,
) -> Result<PortfolioModel> {
    let returns = prices.simple_returns();
    let rows = returns.len();
    let m = prices.assets();
    let mut alpha = DVector::zeros(m);
    for r in &returns {
        for j in 0..m {
            alpha[j] += r[j];
        }
    }
    alpha /= rows as f64;
    let mut q = DMatrix::zeros(m, m);
    for r in &returns {
        for i in 0..m {
            let di = r[i] - alpha[i];
            for j in 0..=i {
                q[(i, j)] += di * (r[j] - alpha[j]);
            }
        }
    }
    let divisor = (rows - 1) as f64;
    for i in 0..m {
        for j in 0..=i {
            let v = q[(i, j)] / divisor;
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    PortfolioModel::new(alpha, q, risk_free, penalties)
}

/// `(alpha . w - R) / sqrt(w' Q w)`.
pub fn sharpe_ratio(w: &[f64], model: &PortfolioModel) -> Result<f64> {
    model.check_weights(w)?;
    let var = model.variance(w);
    if var.is_nan() || var <= 0.0 {
        return Err(QhdeError::UndefinedRatio(var));
    }
    Ok((model.expected_return(w) - model.risk_free) / var.sqrt())
}

/// The penalized Sharpe objective (maximize).
///
/// `beta1 * Sharpe - beta2 (sum w - 1)^2 - beta3 sum_i max(w_i - 1, 0)^2 - beta4 sum_i max(-w_i, 0)^2`.
/// A non-positive variance replaces the Sharpe term by [`DEGENERATE_SHARPE`].
pub fn penalized_objective(w: &[f64], model: &PortfolioModel) -> f64 {
    if w.len() != model.assets() {
        return f64::NAN;
    }
    let p = &model.penalties;
    let sharpe = sharpe_ratio(w, model).unwrap_or(DEGENERATE_SHARPE);
    let budget = (constraint_sum(w) - 1.0).powi(2);
    let over: f64 = w.iter().map(|x| (x - 1.0).max(0.0) * (x - 1.0)).sum();
    let short: f64 = w.iter().map(|x| (-x).max(0.0) * (-x)).sum();
    p.beta1 * sharpe - p.beta2 * budget - p.beta3 * over - p.beta4 * short
}

/// Total allocation `sum w_i`.
pub fn constraint_sum(w: &[f64]) -> f64 {
    w.iter().sum()
}

/// Portfolio variance `w' Q w`.
pub fn mean_variance_risk(w: &[f64], model: &PortfolioModel) -> Result<f64> {
    model.check_weights(w)?;
    Ok(model.variance(w))
}

/// `omega * w' Q w - (1 - omega) * alpha . w`.
pub fn frontier_objective(w: &[f64], model: &PortfolioModel, omega: f64) -> Result<f64> {
    model.check_weights(w)?;
    if !(0.0..=1.0).contains(&omega) {
        return Err(QhdeError::contract(format!("omega {omega} outside [0, 1]")));
    }
    Ok(omega * model.variance(w) - (1.0 - omega) * model.expected_return(w))
}

/// Reported metrics for one weight vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortfolioMetrics {
    /// Penalized objective `F(E)`.
    pub objective: f64,
    /// Sharpe ratio, NaN when undefined.
    pub sharpe: f64,
    /// Allocation sum `S(E)`.
    pub allocation: f64,
}

pub fn portfolio_metrics(w: &[f64], model: &PortfolioModel) -> PortfolioMetrics {
    PortfolioMetrics {
        objective: penalized_objective(w, model),
        sharpe: sharpe_ratio(w, model).unwrap_or(f64::NAN),
        allocation: constraint_sum(w),
    }
}

/// The penalized objective as an optimizer target.
#[derive(Debug, Clone)]
pub struct PortfolioObjective {
    pub model: PortfolioModel,
}

impl PortfolioObjective {
    pub fn new(model: PortfolioModel) -> Self {
        Self { model }
    }
}

impl Objective for PortfolioObjective {
    fn evaluate(&self, x: &[f64]) -> f64 {
        penalized_objective(x, &self.model)
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }
}
