//! Conversion of comparison counts into latent quality scores.

mod bt;
mod hodgerank;
mod posterior;

pub use bt::{bt_log_likelihood, fit_bt, fit_bt_default, BT_MAX_ITER, BT_TOL};
pub use hodgerank::{fit_hodgerank, fit_hodgerank_with, HodgeFlow};
pub use posterior::{
    laplace_posterior, neg_log_posterior, neg_log_posterior_hessian, GaussianPosterior,
    DEFAULT_PRIOR_VAR,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pcm::Pcm;

/// Zero-mean score vector plus how the solver got there.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityScores {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Last log-strength change for BT, weighted squared residual for HodgeRank.
    pub residual: f64,
}

impl QualityScores {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which scaling method turns a PCM into scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoringBackend {
    #[default]
    Bt,
    Hodgerank,
}

impl ScoringBackend {
    pub fn name(self) -> &'static str {
        match self {
            ScoringBackend::Bt => "bt",
            ScoringBackend::Hodgerank => "hodgerank",
        }
    }

    pub fn score(self, pcm: &Pcm) -> Result<QualityScores> {
        match self {
            ScoringBackend::Bt => fit_bt_default(pcm),
            ScoringBackend::Hodgerank => fit_hodgerank(pcm),
        }
    }
}

impl std::str::FromStr for ScoringBackend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bt" => Ok(ScoringBackend::Bt),
            "hodgerank" => Ok(ScoringBackend::Hodgerank),
            other => Err(format!("unknown scoring backend `{other}` (valid: bt, hodgerank)")),
        }
    }
}
