//! Simulated incomplete-design tests and the budget-sweep experiment around them.
//!
//! A trial starts from an initialized PCM, repeatedly asks a sampler for
//! pairs, asks the oracle for one judgment per pair and records it, until the
//! judgment budget is spent. The resulting PCM is scaled and compared with
//! the reference scores of the complete design.

use std::path::PathBuf;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metrics::{plcc, srocc};
use crate::oracle::{
    ground_truth_scores_with, GroundTruthOptions, Oracle, OracleMode, SyntheticOracle,
    SyntheticTruth,
};
use crate::pcm::Pcm;
use crate::samplers::{Sampler, SamplerKind, SimRng};
use crate::scaling::{QualityScores, ScoringBackend};

/// Number of judgments for a fraction of a `subjects`-strong complete design,
/// rounded half up and never below 1.
pub fn budget_from_fraction(fraction: f64, n: usize, subjects: usize) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "budget fraction {fraction} outside (0, 1]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if subjects == 0 {
        return Err(Error::InvalidConfig("subjects must be at least 1".into()));
    }
    let complete = (subjects * n * (n - 1) / 2) as f64;
    // tolerance absorbs representation error such as 0.1 * 675 = 67.49999...
    let budget = (fraction * complete + 0.5 + 1e-9).floor() as usize;
    Ok(budget.max(1))
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub scores: QualityScores,
    pub pcm: Pcm,
    pub judgments: usize,
}

/// Runs one simulated test until exactly `budget` judgments are recorded.
pub fn run_trial(
    oracle: &mut Oracle,
    sampler: &mut dyn Sampler,
    budget: usize,
    scoring: ScoringBackend,
    init_value: f64,
    rng: &mut SimRng,
) -> Result<TrialOutcome> {
    let n = oracle.n();
    let mut pcm = Pcm::new(n, init_value)?;
    let mut recorded = 0;
    while recorded < budget {
        let max_pairs = sampler.batch_size(n).max(1).min(budget - recorded);
        let batch = sampler.next_batch(&pcm, max_pairs, rng)?;
        if batch.is_empty() || batch.len() > max_pairs {
            return Err(Error::SamplerContract {
                sampler: sampler.name().to_string(),
                reason: format!("returned {} pairs for a limit of {max_pairs}", batch.len()),
            });
        }
        for pair in batch {
            let judgment = oracle.judge(pair, rng)?;
            pcm.record(judgment)?;
            sampler.observe(judgment);
            recorded += 1;
        }
    }
    let scores = scoring.score(&pcm)?;
    Ok(TrialOutcome {
        scores,
        pcm,
        judgments: recorded,
    })
}

/// Where the references of an experiment come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DatasetSource {
    File(PathBuf),
    Synthetic { n: usize, refs: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: DatasetSource,
    pub samplers: Vec<SamplerKind>,
    pub fractions: Vec<f64>,
    /// Subjects of the complete design that defines the budget axis.
    pub subjects: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub scoring: ScoringBackend,
    /// Initial value of every off-diagonal trial PCM cell.
    pub init_value: f64,
    pub oracle_mode: OracleMode,
    /// Initialization added to the reference matrix before scaling.
    pub gt_init_value: f64,
    pub synthetic_truth: SyntheticTruth,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            source: DatasetSource::Synthetic { n: 16, refs: 1 },
            samplers: SamplerKind::ALL.to_vec(),
            fractions: vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35],
            subjects: 15,
            repetitions: 100,
            seed: 0,
            scoring: ScoringBackend::Bt,
            init_value: 1.0,
            oracle_mode: OracleMode::Replace,
            gt_init_value: 0.0,
            synthetic_truth: SyntheticTruth::Expected,
            threads: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.samplers.is_empty() {
            return bad("no samplers selected".into());
        }
        if self.fractions.is_empty() {
            return bad("no budget fractions given".into());
        }
        if let Some(f) = self.fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return bad(format!("budget fraction {f} outside (0, 1]"));
        }
        if self.fractions.windows(2).any(|w| w[0] >= w[1]) {
            return bad("budget fractions must be strictly ascending".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.subjects == 0 {
            return bad("subjects must be at least 1".into());
        }
        if !(self.init_value.is_finite() && self.init_value >= 0.0) {
            return bad(format!("init value {} must be nonnegative", self.init_value));
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    fn ground_truth_options(&self) -> GroundTruthOptions {
        GroundTruthOptions {
            backend: self.scoring,
            init_value: self.gt_init_value,
            synthetic: self.synthetic_truth,
        }
    }
}

/// A named oracle; one per reference content.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub id: String,
    pub oracle: Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub sampler: SamplerKind,
    pub reference: String,
    pub fraction: f64,
    pub repetition: usize,
    /// `None` when the correlation is undefined (constant estimate).
    pub plcc: Option<f64>,
    pub srocc: Option<f64>,
    pub judgments: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub sampler: SamplerKind,
    pub fraction: f64,
    pub plcc_mean: Option<f64>,
    pub plcc_std: Option<f64>,
    pub srocc_mean: Option<f64>,
    pub srocc_std: Option<f64>,
    pub repetitions: usize,
    pub references: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dataset: String,
    pub rows: Vec<AggregateRow>,
    pub trials: Vec<TrialResult>,
}

impl ExperimentReport {
    pub fn row(&self, sampler: SamplerKind, fraction: f64) -> Option<&AggregateRow> {
        self.rows
            .iter()
            .find(|r| r.sampler == sampler && (r.fraction - fraction).abs() < 1e-12)
    }
}

/// Per-trial seed from a keyed hash, independent of list positions and
/// execution order.
pub fn trial_seed(
    master: u64,
    reference: &str,
    sampler: SamplerKind,
    fraction: f64,
    repetition: usize,
) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"pairsim/trial/v1");
    h.update(master.to_le_bytes());
    h.update((reference.len() as u64).to_le_bytes());
    h.update(reference.as_bytes());
    h.update(sampler.name().as_bytes());
    h.update([0u8]);
    h.update(fraction.to_bits().to_le_bytes());
    h.update((repetition as u64).to_le_bytes());
    h.finalize().into()
}

/// Seed for generating the `index`-th synthetic reference.
pub fn synthetic_seed(master: u64, index: usize) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"pairsim/synthetic/v1");
    h.update(master.to_le_bytes());
    h.update((index as u64).to_le_bytes());
    h.finalize().into()
}

/// Synthetic references `ref0..` derived from the master seed.
pub fn synthetic_references(n: usize, refs: usize, seed: u64) -> Result<Vec<Reference>> {
    (0..refs)
        .map(|k| {
            let mut rng = SimRng::from_seed(synthetic_seed(seed, k));
            Ok(Reference {
                id: format!("ref{k}"),
                oracle: Oracle::Synthetic(SyntheticOracle::generate(n, &mut rng)?),
            })
        })
        .collect()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct TrialSpec<'a> {
    reference: &'a Reference,
    truth: &'a [f64],
    sampler: SamplerKind,
    fraction: f64,
    repetition: usize,
}

fn execute(spec: &TrialSpec<'_>, cfg: &ExperimentConfig) -> Result<TrialResult> {
    let seed = trial_seed(
        cfg.seed,
        &spec.reference.id,
        spec.sampler,
        spec.fraction,
        spec.repetition,
    );
    let wrap = |source: Error| Error::Trial {
        reference: spec.reference.id.clone(),
        sampler: spec.sampler.name().to_string(),
        fraction: spec.fraction,
        repetition: spec.repetition,
        seed: hex(&seed),
        source: Box::new(source),
    };
    let mut oracle = spec.reference.oracle.clone();
    if let Oracle::Empirical(ref mut o) = oracle {
        if o.mode() != cfg.oracle_mode {
            *o = crate::oracle::EmpiricalOracle::new(o.gt().clone(), cfg.oracle_mode)
                .map_err(wrap)?;
        }
    }
    let n = oracle.n();
    let budget = budget_from_fraction(spec.fraction, n, cfg.subjects).map_err(wrap)?;
    let mut sampler = spec.sampler.build(n);
    let mut rng = SimRng::from_seed(seed);
    let outcome = run_trial(
        &mut oracle,
        sampler.as_mut(),
        budget,
        cfg.scoring,
        cfg.init_value,
        &mut rng,
    )
    .map_err(wrap)?;
    Ok(TrialResult {
        sampler: spec.sampler,
        reference: spec.reference.id.clone(),
        fraction: spec.fraction,
        repetition: spec.repetition,
        plcc: plcc(spec.truth, &outcome.scores.values).ok(),
        srocc: srocc(spec.truth, &outcome.scores.values).ok(),
        judgments: outcome.judgments,
    })
}

fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Mean of per-reference means and of per-reference standard deviations.
fn two_level(per_reference: &[Vec<f64>]) -> (Option<f64>, Option<f64>) {
    let stats: Vec<(f64, f64)> = per_reference.iter().filter_map(|v| mean_std(v)).collect();
    if stats.is_empty() {
        return (None, None);
    }
    let k = stats.len() as f64;
    (
        Some(stats.iter().map(|s| s.0).sum::<f64>() / k),
        Some(stats.iter().map(|s| s.1).sum::<f64>() / k),
    )
}

/// Averages trials over repetitions, then over references.
pub fn aggregate(
    trials: &[TrialResult],
    samplers: &[SamplerKind],
    fractions: &[f64],
    references: &[String],
) -> Vec<AggregateRow> {
    let mut rows = Vec::with_capacity(samplers.len() * fractions.len());
    for &sampler in samplers {
        for &fraction in fractions {
            let cell: Vec<&TrialResult> = trials
                .iter()
                .filter(|t| t.sampler == sampler && t.fraction == fraction)
                .collect();
            let collect = |pick: fn(&TrialResult) -> Option<f64>| -> Vec<Vec<f64>> {
                references
                    .iter()
                    .map(|r| {
                        cell.iter()
                            .filter(|t| &t.reference == r)
                            .filter_map(|t| pick(t))
                            .collect()
                    })
                    .collect()
            };
            let (plcc_mean, plcc_std) = two_level(&collect(|t| t.plcc));
            let (srocc_mean, srocc_std) = two_level(&collect(|t| t.srocc));
            let repetitions = cell.iter().map(|t| t.repetition).max().map_or(0, |m| m + 1);
            rows.push(AggregateRow {
                sampler,
                fraction,
                plcc_mean,
                plcc_std,
                srocc_mean,
                srocc_std,
                repetitions,
                references: references.len(),
            });
        }
    }
    rows
}

/// Runs every (reference, sampler, fraction, repetition) trial of `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let (dataset, references) = match &cfg.source {
        DatasetSource::File(path) => {
            let loaded = crate::io::load_dataset(path, cfg.oracle_mode)?;
            (loaded.name, loaded.references)
        }
        DatasetSource::Synthetic { n, refs } => (
            "synthetic".to_string(),
            synthetic_references(*n, *refs, cfg.seed)?,
        ),
    };
    run_experiment_on(&dataset, &references, cfg)
}

/// Like [`run_experiment`] but with references supplied by the caller.
pub fn run_experiment_on(
    dataset: &str,
    references: &[Reference],
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    if references.is_empty() {
        return Err(Error::InvalidConfig("dataset has no references".into()));
    }
    let gt_options = cfg.ground_truth_options();
    let truths = references
        .iter()
        .map(|r| {
            ground_truth_scores_with(&r.oracle, &gt_options)
                .map(|s| s.values)
                .map_err(|e| Error::InvalidDataset(format!("reference `{}`: {e}", r.id)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut specs = Vec::new();
    for (reference, truth) in references.iter().zip(&truths) {
        for &sampler in &cfg.samplers {
            for &fraction in &cfg.fractions {
                for repetition in 0..cfg.repetitions {
                    specs.push(TrialSpec {
                        reference,
                        truth,
                        sampler,
                        fraction,
                        repetition,
                    });
                }
            }
        }
    }

    let run_all = || -> Result<Vec<TrialResult>> {
        specs.par_iter().map(|spec| execute(spec, cfg)).collect()
    };
    let trials = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };

    let ids: Vec<String> = references.iter().map(|r| r.id.clone()).collect();
    let rows = aggregate(&trials, &cfg.samplers, &cfg.fractions, &ids);
    Ok(ExperimentReport {
        dataset: dataset.to_string(),
        rows,
        trials,
    })
}
