//! Command-line front end: `run`, `synth` and `plot`.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::harness::{run_experiment, synthetic_references, DatasetSource, ExperimentConfig};
use crate::io::{emit_plot, read_results, save_synthetic, write_results, ResultsTable};
use crate::oracle::{OracleMode, SyntheticTruth};
use crate::samplers::SamplerKind;
use crate::scaling::ScoringBackend;

/// Comma-separated sampler names, kept in the given order.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerList(pub Vec<SamplerKind>);

impl FromStr for SamplerList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let kinds = s
            .split(',')
            .map(|name| name.trim().parse::<SamplerKind>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut seen = kinds.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != kinds.len() {
            return Err("sampler listed twice".into());
        }
        Ok(SamplerList(kinds))
    }
}

/// Budget fractions: `lo:hi:step` or a comma list, ascending within (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetList(pub Vec<f64>);

fn snap(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

impl FromStr for BudgetList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number (expected lo:hi:step or a comma list)"))
        };
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("malformed range `{s}`: expected lo:hi:step"));
            }
            let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step.is_nan() || step <= 0.0 || hi < lo {
                return Err(format!("malformed range `{s}`: need step > 0 and hi >= lo"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|k| snap(lo + k as f64 * step)).collect::<Vec<_>>()
        } else {
            s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
        };
        if let Some(f) = values.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(format!("budget fraction {f} outside (0, 1]"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err("budget fractions must be strictly ascending".into());
        }
        Ok(BudgetList(values))
    }
}

/// `n=16,refs=1` style synthetic dataset description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub refs: usize,
}

impl FromStr for SyntheticSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut spec = SyntheticSpec { n: 16, refs: 1 };
        for item in s.split(',').filter(|t| !t.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}` (keys: n, refs)"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("`{value}` is not a positive integer"))?;
            match key.trim() {
                "n" if value >= 2 => spec.n = value,
                "n" => return Err("n must be at least 2".into()),
                "refs" if value >= 1 => spec.refs = value,
                "refs" => return Err("refs must be at least 1".into()),
                other => return Err(format!("unknown key `{other}` (keys: n, refs)")),
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Parser)]
#[command(name = "pairsim", version, about = "Benchmark pairwise-comparison sampling algorithms by simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a budget sweep and write aggregated PLCC/SROCC per sampler.
    Run(RunArgs),
    /// Generate synthetic references and save them as a dataset file.
    Synth(SynthArgs),
    /// Plot a results CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Dataset file (recorded matrices or synthetic models).
    #[arg(long, conflicts_with = "synthetic")]
    pub dataset: Option<PathBuf>,
    /// Synthetic dataset, e.g. `n=16,refs=1` (the default source).
    #[arg(long)]
    pub synthetic: Option<SyntheticSpec>,
    /// Comma list of: hr-random, swiss, crowd-bt, hr-active, hybrid-mst, asap.
    #[arg(long, default_value = "hr-random,swiss,crowd-bt,hr-active,hybrid-mst,asap")]
    pub samplers: SamplerList,
    /// `lo:hi:step` or comma list of fractions of the complete design.
    #[arg(long, default_value = "0.05:0.35:0.05")]
    pub budgets: BudgetList,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Subjects of the complete design defining the budget axis.
    #[arg(long, default_value_t = 15)]
    pub subjects: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "bt", value_parser = ["bt", "hodgerank"])]
    pub scoring: String,
    /// Judgment draws from recorded votes: with replacement or exhausting the pool.
    #[arg(long, default_value = "replace", value_parser = ["replace", "exhaust"])]
    pub oracle: String,
    /// Initial value of every off-diagonal trial PCM cell.
    #[arg(long, default_value_t = 1.0)]
    pub init: f64,
    /// Initialization added to the ground-truth matrix.
    #[arg(long, default_value_t = 0.0)]
    pub gt_init: f64,
    /// Use one simulated complete test (seeded) as synthetic ground truth.
    #[arg(long)]
    pub simulated_truth: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot of the results.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, requires = "plot")]
    pub fisher: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub refs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "synthetic")]
    pub name: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Plot arctanh of the correlations.
    #[arg(long)]
    pub fisher: bool,
}

impl RunArgs {
    pub fn to_config(&self) -> ExperimentConfig {
        let source = match (&self.dataset, self.synthetic) {
            (Some(path), _) => DatasetSource::File(path.clone()),
            (None, Some(s)) => DatasetSource::Synthetic { n: s.n, refs: s.refs },
            (None, None) => DatasetSource::Synthetic { n: 16, refs: 1 },
        };
        ExperimentConfig {
            source,
            samplers: self.samplers.0.clone(),
            fractions: self.budgets.0.clone(),
            subjects: self.subjects,
            repetitions: self.reps,
            seed: self.seed,
            scoring: self.scoring.parse().unwrap_or(ScoringBackend::Bt),
            init_value: self.init,
            oracle_mode: self.oracle.parse().unwrap_or(OracleMode::Replace),
            gt_init_value: self.gt_init,
            synthetic_truth: self
                .simulated_truth
                .map_or(SyntheticTruth::Expected, |seed| SyntheticTruth::Simulated { seed }),
            threads: self.threads,
        }
    }
}

/// Parses arguments (including the program name).
pub fn parse_cli<I, T>(argv: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.to_config();
            let report = run_experiment(&cfg)?;
            let table = ResultsTable::from(&report);
            match &args.out {
                Some(path) => write_results(&table, path)?,
                None => print!("{}", table.to_csv()?),
            }
            if let Some(path) = &args.plot {
                emit_plot(&table, path, args.fisher)?;
            }
        }
        Command::Synth(args) => {
            let refs = synthetic_references(args.n, args.refs, args.seed)?;
            save_synthetic(&args.name, &refs, &args.out)?;
        }
        Command::Plot(args) => {
            let table = read_results(&args.input)?;
            emit_plot(&table, &args.out, args.fisher)?;
        }
    }
    Ok(())
}

/// Full entry point; returns the process exit code (0 ok, 1 runtime, 2 usage).
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_cli(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            1
        }
    }
}
