//! Pair-selection strategies behind a common contract.
//!
//! A sampler looks at the current comparison matrix (and whatever state it
//! keeps) and proposes the next pair or batch of pairs. The harness asks for
//! at most `max_pairs` and feeds every resulting judgment back via
//! [`Sampler::observe`].

mod asap;
mod crowd_bt;
mod eig;
mod hr_active;
mod hybrid_mst;
mod random;
mod swiss;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pcm::{Judgment, Pair, Pcm};
use crate::scaling::DEFAULT_PRIOR_VAR;

pub use asap::{asap_candidates, Asap};
pub use crowd_bt::{gaussian_kl, beta_kl, CrowdBt, CrowdBtConfig, CrowdBtState};
pub use eig::{eig_from_moments, pair_eig, EigTable, GAUSS_HERMITE_9};
pub use hr_active::{effective_resistances, HrActive};
pub use hybrid_mst::{max_spanning_tree, HybridMst};
pub use random::{random_next, HrRandom};
pub use swiss::{swiss_next_round, Swiss};

/// Random stream handed to samplers and oracles.
pub type SimRng = ChaCha8Rng;

/// Gains closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-12;

pub trait Sampler: Send {
    fn name(&self) -> &str;

    /// Pairs emitted per call when the budget is not binding.
    fn batch_size(&self, n: usize) -> usize;

    /// Returns between 1 and `max_pairs` pairs.
    fn next_batch(&mut self, pcm: &Pcm, max_pairs: usize, rng: &mut SimRng) -> Result<Vec<Pair>>;

    fn observe(&mut self, _judgment: Judgment) {}
}

/// The six benchmarked strategies, by their canonical CLI/CSV names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SamplerKind {
    #[serde(rename = "hr-random")]
    HrRandom,
    #[serde(rename = "swiss")]
    Swiss,
    #[serde(rename = "crowd-bt")]
    CrowdBt,
    #[serde(rename = "hr-active")]
    HrActive,
    #[serde(rename = "hybrid-mst")]
    HybridMst,
    #[serde(rename = "asap")]
    Asap,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 6] = [
        SamplerKind::HrRandom,
        SamplerKind::Swiss,
        SamplerKind::CrowdBt,
        SamplerKind::HrActive,
        SamplerKind::HybridMst,
        SamplerKind::Asap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::HrRandom => "hr-random",
            SamplerKind::Swiss => "swiss",
            SamplerKind::CrowdBt => "crowd-bt",
            SamplerKind::HrActive => "hr-active",
            SamplerKind::HybridMst => "hybrid-mst",
            SamplerKind::Asap => "asap",
        }
    }

    /// Fresh sampler instance for `n` stimuli with default settings.
    pub fn build(self, n: usize) -> Box<dyn Sampler> {
        match self {
            SamplerKind::HrRandom => Box::new(HrRandom),
            SamplerKind::Swiss => Box::new(Swiss::new()),
            SamplerKind::CrowdBt => Box::new(CrowdBt::new(n, CrowdBtConfig::default())),
            SamplerKind::HrActive => Box::new(HrActive),
            SamplerKind::HybridMst => Box::new(HybridMst::new(DEFAULT_PRIOR_VAR)),
            SamplerKind::Asap => Box::new(Asap::new(DEFAULT_PRIOR_VAR)),
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown sampler `{s}` (valid: {})", Self::valid_names()))
    }
}

/// Orders candidates by decreasing gain; near-equal gains fall back to
/// lexicographic pair order. Returns at most `k` entries.
pub fn top_by_gain(mut candidates: Vec<(Pair, f64)>, k: usize) -> Vec<(Pair, f64)> {
    candidates.sort_by_key(|c| c.0);
    let mut out = Vec::with_capacity(k.min(candidates.len()));
    while out.len() < k && !candidates.is_empty() {
        let mut best = 0;
        for (idx, c) in candidates.iter().enumerate().skip(1) {
            if c.1 > candidates[best].1 + TIE_TOL {
                best = idx;
            }
        }
        out.push(candidates.remove(best));
    }
    out
}
