//! Shifted and rotated test functions.
//!
//! Every function is evaluated at `z = R (x - shift)`, rescaled onto its
//! classic domain, and normalized so that its global minimum is exactly 0 at
//! `x = shift`. The default box is `[-100, 100]^dim`, as in the CEC suites.

use std::f64::consts::{E, PI};
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{QhdeError, Result};
use crate::objective::Objective;
use crate::random::RandomSource;
use crate::space::SearchSpace;

/// Optimum of the classic Schwefel 2.26 function on `[-500, 500]`.
const SCHWEFEL_OPT: f64 = 420.968_746_227_503_6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BenchmarkFunction {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Ackley,
    Griewank,
    Schwefel,
    Levy,
    Zakharov,
    /// `min(|z|^2, |z - separation * e1|^2 + depth)`: the global basin at
    /// `z = 0` and a shallower one (floor `depth`) along the first axis.
    DoubleWell {
        separation: f64,
        depth: f64,
    },
}

impl BenchmarkFunction {
    /// The eight functions of the desk suite (double-well excluded).
    pub const SUITE: [BenchmarkFunction; 8] = [
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Ackley,
        BenchmarkFunction::Griewank,
        BenchmarkFunction::Schwefel,
        BenchmarkFunction::Levy,
        BenchmarkFunction::Zakharov,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Ackley => "ackley",
            BenchmarkFunction::Griewank => "griewank",
            BenchmarkFunction::Schwefel => "schwefel",
            BenchmarkFunction::Levy => "levy",
            BenchmarkFunction::Zakharov => "zakharov",
            BenchmarkFunction::DoubleWell { .. } => "double_well",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::SUITE
            .iter()
            .find(|f| f.name() == name)
            .copied()
            .ok_or_else(|| QhdeError::config(format!("unknown benchmark function {name:?}")))
    }

    /// Factor mapping a `[-100, 100]` offset onto the function's classic domain.
    fn scale(&self) -> f64 {
        match self {
            BenchmarkFunction::Sphere => 1.0,
            BenchmarkFunction::Rosenbrock => 2.048 / 100.0,
            BenchmarkFunction::Rastrigin => 5.12 / 100.0,
            BenchmarkFunction::Ackley => 32.768 / 100.0,
            BenchmarkFunction::Griewank => 600.0 / 100.0,
            BenchmarkFunction::Schwefel => 1000.0 / 100.0,
            BenchmarkFunction::Levy => 10.0 / 100.0,
            BenchmarkFunction::Zakharov => 10.0 / 100.0,
            BenchmarkFunction::DoubleWell { .. } => 1.0,
        }
    }

    /// Base function on the rescaled offset `y`; minimum 0 at `y = 0`.
    pub fn base(&self, y: &[f64]) -> f64 {
        let d = y.len() as f64;
        match *self {
            BenchmarkFunction::Sphere => y.iter().map(|v| v * v).sum(),
            BenchmarkFunction::Rosenbrock => y
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                    100.0 * (b - a * a).powi(2) + (a - 1.0).powi(2)
                })
                .sum(),
            BenchmarkFunction::Rastrigin => y
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BenchmarkFunction::Ackley => {
                let sq = y.iter().map(|v| v * v).sum::<f64>() / d;
                let cos = y.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                (-20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E).max(0.0)
            }
            BenchmarkFunction::Griewank => {
                let sum = y.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = y
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            BenchmarkFunction::Schwefel => {
                let peak = schwefel_term(SCHWEFEL_OPT, d);
                y.iter()
                    .map(|v| peak - schwefel_term(v + SCHWEFEL_OPT, d))
                    .sum::<f64>()
                    .max(0.0)
            }
            BenchmarkFunction::Levy => {
                let w: Vec<f64> = y.iter().map(|v| 1.0 + v / 4.0).collect();
                let last = w[w.len() - 1];
                let head = (PI * w[0]).sin().powi(2);
                let mid: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                head + mid + tail
            }
            BenchmarkFunction::Zakharov => {
                let sq: f64 = y.iter().map(|v| v * v).sum();
                let lin: f64 = y
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                sq + lin.powi(2) + lin.powi(4)
            }
            BenchmarkFunction::DoubleWell { separation, depth } => {
                let near: f64 = y.iter().map(|v| v * v).sum();
                let far: f64 = y
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        if i == 0 {
                            (v - separation).powi(2)
                        } else {
                            v * v
                        }
                    })
                    .sum::<f64>()
                    + depth;
                near.min(far)
            }
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `w sin(sqrt|w|)` with the CEC boundary treatment outside `[-500, 500]`.
fn schwefel_term(w: f64, d: f64) -> f64 {
    if w > 500.0 {
        let m = 500.0 - w % 500.0;
        m * m.abs().sqrt().sin() - (w - 500.0).powi(2) / (10_000.0 * d)
    } else if w < -500.0 {
        let m = w.abs() % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - (w + 500.0).powi(2) / (10_000.0 * d)
    } else {
        w * w.abs().sqrt().sin()
    }
}

/// A concrete test problem: base function, shift, rotation and box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub function: BenchmarkFunction,
    pub shift: Vec<f64>,
    /// Row-major orthogonal matrix; absent means identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<f64>>>,
    pub space: SearchSpace,
}

const ORTHOGONALITY_TOL: f64 = 1e-10;

impl BenchmarkSpec {
    pub fn new(
        function: BenchmarkFunction,
        shift: Vec<f64>,
        rotation: Option<Vec<Vec<f64>>>,
        space: SearchSpace,
    ) -> Result<Self> {
        let spec = Self {
            function,
            shift,
            rotation,
            space,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Unshifted, unrotated function on `[-100, 100]^dim`.
    pub fn plain(function: BenchmarkFunction, dim: usize) -> Result<Self> {
        Self::new(
            function,
            vec![0.0; dim],
            None,
            SearchSpace::uniform(dim, -100.0, 100.0)?,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.space.dim();
        if self.shift.len() != dim {
            return Err(QhdeError::config(format!(
                "{}: shift has {} entries for dimension {dim}",
                self.function,
                self.shift.len()
            )));
        }
        for (j, s) in self.shift.iter().enumerate() {
            if !(self.space.lower()[j] < *s && *s < self.space.upper()[j]) {
                return Err(QhdeError::config(format!(
                    "{}: shifted optimum {s} not strictly inside bounds on dimension {j}",
                    self.function
                )));
            }
        }
        if let Some(r) = &self.rotation {
            if r.len() != dim || r.iter().any(|row| row.len() != dim) {
                return Err(QhdeError::config(format!(
                    "{}: rotation must be {dim}x{dim}",
                    self.function
                )));
            }
            let dev = orthogonality_error(r);
            if dev.is_nan() || dev >= ORTHOGONALITY_TOL {
                return Err(QhdeError::config(format!(
                    "{}: rotation deviates from orthogonal by {dev:e}",
                    self.function
                )));
            }
        }
        match self.function {
            BenchmarkFunction::Rosenbrock if dim < 2 => Err(QhdeError::config(
                "rosenbrock needs at least two dimensions",
            )),
            BenchmarkFunction::DoubleWell { separation, depth }
                if !(depth > 0.0 && depth < separation * separation) =>
            {
                Err(QhdeError::config(format!(
                    "double well needs 0 < depth < separation^2, got depth {depth}, separation {separation}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn label(&self) -> String {
        format!("{}-d{}", self.function, self.dim())
    }

    fn transformed(&self, x: &[f64]) -> Vec<f64> {
        let offset: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        let z = match &self.rotation {
            Some(r) => r
                .iter()
                .map(|row| row.iter().zip(&offset).map(|(a, b)| a * b).sum())
                .collect(),
            None => offset,
        };
        let scale = self.function.scale();
        z.into_iter().map(|v| v * scale).collect()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.function.base(&self.transformed(x))
    }
}

/// A 1-D double well on `[lower, upper]` whose shallower (trap) floor sits at
/// the origin and whose global floor sits at `-separation`.
///
/// Multiplicative perturbations of points near the origin stay near the
/// origin, so only moves that genuinely cross the barrier reach the global basin.
pub fn trap_landscape(
    separation: f64,
    depth: f64,
    lower: f64,
    upper: f64,
) -> Result<BenchmarkSpec> {
    BenchmarkSpec::new(
        BenchmarkFunction::DoubleWell { separation, depth },
        vec![-separation],
        None,
        SearchSpace::new(vec![lower], vec![upper])?,
    )
}

/// Checked evaluation of `spec` at `x`.
pub fn evaluate(spec: &BenchmarkSpec, x: &[f64]) -> Result<f64> {
    spec.space.check_len(x)?;
    Ok(spec.value(x))
}

impl Objective for BenchmarkSpec {
    fn evaluate(&self, x: &[f64]) -> f64 {
        if x.len() != self.dim() {
            return f64::NAN;
        }
        self.value(x)
    }
}

/// Frobenius norm of `R R^T - I`.
pub fn orthogonality_error(r: &[Vec<f64>]) -> f64 {
    let n = r.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = r[i].iter().zip(&r[j]).map(|(a, b)| a * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            acc += (dot - target).powi(2);
        }
    }
    acc.sqrt()
}

/// Haar-uniform random orthogonal matrix (sign-corrected QR of a Gaussian matrix).
pub fn make_rotation(dim: usize, rng: &mut RandomSource) -> Result<Vec<Vec<f64>>> {
    if dim == 0 {
        return Err(QhdeError::contract("rotation dimension must be at least 1"));
    }
    let gauss: Vec<f64> = (0..dim * dim).map(|_| rng.normal()).collect();
    let qr = DMatrix::from_row_slice(dim, dim, &gauss).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok((0..dim)
        .map(|i| (0..dim).map(|j| q[(i, j)]).collect())
        .collect())
}

/// The eight-function desk suite at `dim`, each with a seeded shift in
/// `[-80, 80]^dim` and a seeded rotation. Function `k` draws from stream `k`.
pub fn desk_suite(dim: usize, seed: u64) -> Result<Vec<BenchmarkSpec>> {
    BenchmarkFunction::SUITE
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let mut rng = RandomSource::new(seed, k as u64);
            let shift = (0..dim).map(|_| rng.uniform_in(-80.0, 80.0)).collect();
            let rotation = make_rotation(dim, &mut rng)?;
            BenchmarkSpec::new(
                *f,
                shift,
                Some(rotation),
                SearchSpace::uniform(dim, -100.0, 100.0)?,
            )
        })
        .collect()
}
