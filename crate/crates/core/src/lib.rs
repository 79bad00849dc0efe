//! Simulation toolkit for benchmarking pairwise-comparison sampling algorithms.
//!
//! Incomplete pairwise tests are simulated against complete-design data,
//! the resulting comparison matrices are scaled to quality scores, and the
//! scores are correlated with the complete-design reference as the
//! comparison budget grows.

pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod pcm;
pub mod samplers;
pub mod scaling;

pub use error::{Error, Result};
pub use harness::{
    budget_from_fraction, run_experiment, run_experiment_on, run_trial, AggregateRow,
    DatasetSource, ExperimentConfig, ExperimentReport, Reference, TrialOutcome, TrialResult,
};
pub use metrics::{fisher_z, plcc, srocc};
pub use oracle::{EmpiricalOracle, Oracle, OracleMode, SyntheticOracle};
pub use pcm::{Judgment, Pair, Pcm};
pub use samplers::{Sampler, SamplerKind, SimRng};
pub use scaling::{fit_bt, fit_hodgerank, laplace_posterior, GaussianPosterior, QualityScores, ScoringBackend};
