//! Differential evolution with quantum-tunneling and elite-perturbation
//! extensions, plus the benchmark and portfolio problems used to evaluate it.
//!
//! ```
//! use qhde::{run, BenchmarkFunction, BenchmarkSpec, QhdeConfig};
//!
//! let sphere = BenchmarkSpec::plain(BenchmarkFunction::Sphere, 2).unwrap();
//! let cfg = QhdeConfig { max_generations: 50, ..QhdeConfig::default() };
//! let record = run(&sphere, &sphere.space, &cfg).unwrap();
//! assert!(record.best_fitness < 1.0);
//! ```

pub mod benchmarks;
pub mod de;
pub mod elite;
pub mod error;
pub mod harness;
pub mod initializer;
pub mod objective;
pub mod optimizer;
pub mod portfolio;
pub mod random;
pub mod solution;
pub mod space;
pub mod tunneling;

pub use benchmarks::{desk_suite, BenchmarkFunction, BenchmarkSpec};
pub use error::{QhdeError, Result};
pub use objective::{FnObjective, Objective, Sense};
pub use optimizer::{run, run_from_positions, run_replicates, QhdeConfig, RunRecord, Strategies};
pub use random::RandomSource;
pub use solution::{CandidateSolution, Population};
pub use space::SearchSpace;
