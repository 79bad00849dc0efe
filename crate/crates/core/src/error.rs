use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need at least 2 stimuli")]
    InvalidDimension(usize),

    #[error("stimulus index {index} out of range for {n} stimuli")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid judgment: winner and loser are both stimulus {0}")]
    InvalidJudgment(usize),

    #[error("invalid pair: both ends are stimulus {0}")]
    InvalidPair(usize),

    #[error("invalid init value {0}: must be finite and nonnegative")]
    InvalidInitValue(f64),

    #[error("preference between {i} and {j} is undefined: no comparisons recorded")]
    UndefinedPreference { i: usize, j: usize },

    #[error("ill-posed scaling problem: {0}")]
    IllPosed(String),

    #[error("scaling did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid posterior: {0}")]
    InvalidPosterior(String),

    #[error("vote pool exhausted for pair ({a}, {b})")]
    PoolExhausted { a: usize, b: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("value {0} outside the domain [-1, 1]")]
    Domain(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sampler `{sampler}` misbehaved: {reason}")]
    SamplerContract { sampler: String, reason: String },

    #[error("trial failed (reference `{reference}`, sampler `{sampler}`, fraction {fraction}, repetition {repetition}, seed {seed}): {source}")]
    Trial {
        reference: String,
        sampler: String,
        fraction: f64,
        repetition: usize,
        seed: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("results table is empty")]
    EmptyTable,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
