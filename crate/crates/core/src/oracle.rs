//! Simulated subjects: where judgments and ground-truth scores come from.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::pcm::{Judgment, Pair, Pcm};
use crate::samplers::SimRng;
use crate::scaling::{QualityScores, ScoringBackend};

/// How an empirical oracle draws recorded votes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Bernoulli draw on the recorded win rate; the dataset is never consumed.
    #[default]
    Replace,
    /// Each recorded vote can be drawn once.
    Exhaust,
}

impl OracleMode {
    pub fn name(self) -> &'static str {
        match self {
            OracleMode::Replace => "replace",
            OracleMode::Exhaust => "exhaust",
        }
    }
}

impl std::str::FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "replace" => Ok(OracleMode::Replace),
            "exhaust" => Ok(OracleMode::Exhaust),
            other => Err(format!("unknown oracle mode `{other}` (valid: replace, exhaust)")),
        }
    }
}

/// Oracle backed by a complete-design comparison matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalOracle {
    gt: Pcm,
    mode: OracleMode,
    pool: Option<Pcm>,
}

impl EmpiricalOracle {
    pub fn new(gt: Pcm, mode: OracleMode) -> Result<Self> {
        if let Some(p) = Pair::all(gt.n()).find(|p| gt.pair_total(p.a(), p.b()) <= 0.0) {
            return Err(Error::InvalidDataset(format!(
                "incomplete design: pair {p} has no recorded votes"
            )));
        }
        let pool = (mode == OracleMode::Exhaust).then(|| gt.clone());
        Ok(EmpiricalOracle { gt, mode, pool })
    }

    pub fn gt(&self) -> &Pcm {
        &self.gt
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    /// Votes still available in exhaust mode.
    pub fn remaining(&self) -> Option<f64> {
        self.pool.as_ref().map(|p| p.total_comparisons())
    }

    pub fn judge(&mut self, pair: Pair, rng: &mut SimRng) -> Result<Judgment> {
        let (a, b) = (pair.a(), pair.b());
        let source = self.pool.as_ref().unwrap_or(&self.gt);
        let (for_a, for_b) = (source.count(a, b), source.count(b, a));
        let total = for_a + for_b;
        if total <= 0.0 {
            return Err(match self.mode {
                OracleMode::Exhaust => Error::PoolExhausted { a, b },
                OracleMode::Replace => Error::InvalidDataset(format!("no votes on pair {pair}")),
            });
        }
        let a_wins = rng.random::<f64>() * total < for_a;
        let judgment = if a_wins {
            Judgment::new(a, b)?
        } else {
            Judgment::new(b, a)?
        };
        if let Some(pool) = self.pool.as_mut() {
            let (w, l) = (judgment.winner, judgment.loser);
            pool.set(w, l, (pool.count(w, l) - 1.0).max(0.0));
        }
        Ok(judgment)
    }
}

/// Per-stimulus Normal quality model with random preference inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticOracle {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub flip_prob: f64,
    pub subjects: usize,
}

pub const DEFAULT_FLIP_PROB: f64 = 0.1;
pub const DEFAULT_SUBJECTS: usize = 15;

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

impl SyntheticOracle {
    pub fn new(mu: Vec<f64>, sigma: Vec<f64>, flip_prob: f64, subjects: usize) -> Result<Self> {
        let oracle = SyntheticOracle {
            mu,
            sigma,
            flip_prob,
            subjects,
        };
        oracle.validate()?;
        Ok(oracle)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu.len() != self.sigma.len() {
            return Err(Error::InvalidDataset(format!(
                "mu has {} entries but sigma has {}",
                self.mu.len(),
                self.sigma.len()
            )));
        }
        if self.mu.len() < 2 {
            return Err(Error::InvalidDimension(self.mu.len()));
        }
        if !(0.0..1.0).contains(&self.flip_prob) {
            return Err(Error::InvalidDataset(format!(
                "flip probability {} outside [0, 1)",
                self.flip_prob
            )));
        }
        if self.subjects == 0 {
            return Err(Error::InvalidDataset("subjects must be at least 1".into()));
        }
        if self.mu.iter().any(|m| !m.is_finite())
            || self.sigma.iter().any(|s| !s.is_finite() || *s < 0.0)
        {
            return Err(Error::InvalidDataset(
                "mu must be finite and sigma finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// MOS uniform on [1, 5], standard deviation uniform on [0, 0.7].
    pub fn generate(n: usize, rng: &mut SimRng) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let mut mu = Vec::with_capacity(n);
        let mut sigma = Vec::with_capacity(n);
        for _ in 0..n {
            mu.push(rng.random_range(1.0..5.0));
            sigma.push(rng.random_range(0.0..0.7));
        }
        Ok(SyntheticOracle {
            mu,
            sigma,
            flip_prob: DEFAULT_FLIP_PROB,
            subjects: DEFAULT_SUBJECTS,
        })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn judge(&self, pair: Pair, rng: &mut SimRng) -> Judgment {
        let (a, b) = (pair.a(), pair.b());
        let xa = self.mu[a] + self.sigma[a] * rng.sample::<f64, _>(StandardNormal);
        let xb = self.mu[b] + self.sigma[b] * rng.sample::<f64, _>(StandardNormal);
        let mut a_wins = if xa == xb { rng.random::<bool>() } else { xa > xb };
        if rng.random::<f64>() < self.flip_prob {
            a_wins = !a_wins;
        }
        if a_wins {
            Judgment { winner: a, loser: b }
        } else {
            Judgment { winner: b, loser: a }
        }
    }

    /// Closed-form probability that `i` is reported better than `j`.
    pub fn expected_preference(&self, i: usize, j: usize) -> f64 {
        let spread = (self.sigma[i].powi(2) + self.sigma[j].powi(2)).sqrt();
        let diff = self.mu[i] - self.mu[j];
        let p = if spread == 0.0 {
            if diff > 0.0 {
                1.0
            } else if diff < 0.0 {
                0.0
            } else {
                0.5
            }
        } else {
            std_normal_cdf(diff / spread)
        };
        (1.0 - self.flip_prob) * p + self.flip_prob * (1.0 - p)
    }

    /// Deterministic matrix of expected vote counts for `subjects` per pair.
    pub fn expected_pcm(&self) -> Pcm {
        let n = self.n();
        let mut pcm = Pcm::new(n, 0.0).expect("validated dimension");
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pcm.set(i, j, self.subjects as f64 * self.expected_preference(i, j));
                }
            }
        }
        pcm
    }

    /// One simulated complete-design test with `subjects` votes per pair.
    pub fn simulated_pcm(&self, rng: &mut SimRng) -> Pcm {
        let mut pcm = Pcm::new(self.n(), 0.0).expect("validated dimension");
        for p in Pair::all(self.n()) {
            for _ in 0..self.subjects {
                pcm.record(self.judge(p, rng)).expect("valid judgment");
            }
        }
        pcm
    }
}

/// Reference construction for synthetic oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SyntheticTruth {
    /// Scale the closed-form expected matrix.
    #[default]
    Expected,
    /// Scale one simulated complete test drawn with this seed.
    Simulated { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruthOptions {
    pub backend: ScoringBackend,
    /// Added to every off-diagonal cell before scaling.
    pub init_value: f64,
    pub synthetic: SyntheticTruth,
}

impl Default for GroundTruthOptions {
    fn default() -> Self {
        GroundTruthOptions {
            backend: ScoringBackend::Bt,
            init_value: 0.0,
            synthetic: SyntheticTruth::Expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Oracle {
    Empirical(EmpiricalOracle),
    Synthetic(SyntheticOracle),
}

impl Oracle {
    pub fn n(&self) -> usize {
        match self {
            Oracle::Empirical(o) => o.gt.n(),
            Oracle::Synthetic(o) => o.n(),
        }
    }

    pub fn judge(&mut self, pair: Pair, rng: &mut SimRng) -> Result<Judgment> {
        if pair.b() >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: pair.b(),
                n: self.n(),
            });
        }
        match self {
            Oracle::Empirical(o) => o.judge(pair, rng),
            Oracle::Synthetic(o) => Ok(o.judge(pair, rng)),
        }
    }

    /// The complete-design matrix the reference scores are fitted on.
    pub fn reference_pcm(&self, options: &GroundTruthOptions) -> Result<Pcm> {
        let base = match (self, options.synthetic) {
            (Oracle::Empirical(o), _) => o.gt.clone(),
            (Oracle::Synthetic(o), SyntheticTruth::Expected) => o.expected_pcm(),
            (Oracle::Synthetic(o), SyntheticTruth::Simulated { seed }) => {
                use rand::SeedableRng;
                o.simulated_pcm(&mut SimRng::seed_from_u64(seed))
            }
        };
        if options.init_value == 0.0 {
            return Ok(base);
        }
        let n = base.n();
        let mut pcm = Pcm::new(n, options.init_value)?;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pcm.set(i, j, base.count(i, j) + options.init_value);
                }
            }
        }
        Ok(pcm)
    }
}

/// Ground-truth scores with the default options (BT, no initialization).
pub fn ground_truth_scores(oracle: &Oracle, backend: ScoringBackend) -> Result<QualityScores> {
    ground_truth_scores_with(
        oracle,
        &GroundTruthOptions {
            backend,
            ..GroundTruthOptions::default()
        },
    )
}

pub fn ground_truth_scores_with(
    oracle: &Oracle,
    options: &GroundTruthOptions,
) -> Result<QualityScores> {
    options.backend.score(&oracle.reference_pcm(options)?)
}
