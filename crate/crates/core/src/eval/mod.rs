//! Slope-based evaluation of seeders.
//!
//! A run seeds `init` plus `k_max` budgeted nodes, measures the minimum access
//! probability after each prefix `k = 1..=k_max`, and fits a least-squares
//! line through those points. The metric is the mean slope over independent
//! runs.

mod category;
mod timing;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{mix_seed, replicate_rng, AccessOracle, CascadeError};
use crate::graph::{Graph, NodeId};
use crate::seeders::{SeedError, SeedSequence, SeedStrategy};

pub use category::{categorize, categorize_values, Categorization, RelativeCategory};
pub use timing::{benchmark_runtime, run_single_core, TimingRecord};

const INIT_TAG: u64 = 0x1417;
const SEEDER_TAG: u64 = 0x5EED;
const EVAL_TAG: u64 = 0xE7A1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("line fit needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("line fit needs at least two distinct budgets")]
    DegenerateFit,
    #[error("at least one run is required")]
    NoRuns,
    #[error("seed sequence has {have} seeds, curve needs {need}")]
    ShortSequence { have: usize, need: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
}

/// Measures the worst-off node's access probability for a seed set.
pub trait AccessEvaluator: Sync {
    /// `stream` distinguishes independent measurements.
    fn pi_min(&self, g: &Graph, seeds: &[NodeId], stream: u64) -> Result<f64, EvalError>;
}

impl AccessEvaluator for AccessOracle {
    fn pi_min(&self, g: &Graph, seeds: &[NodeId], stream: u64) -> Result<f64, EvalError> {
        Ok(self.estimate(g, seeds, stream)?.pi_min())
    }
}

/// Stream id for the measurement of prefix `k` in run `run`.
pub fn measurement_stream(run: usize, k: usize) -> u64 {
    ((run as u64) << 32) | k as u64
}

/// `(k, pi_min(k))` for `k` in `first_k..=k_max`, where prefix `k` is the
/// initial seed plus the first `k` chosen seeds.
pub fn pi_min_curve(
    g: &Graph,
    seq: &SeedSequence,
    evaluator: &dyn AccessEvaluator,
    k_max: usize,
    run: usize,
    include_baseline: bool,
) -> Result<Vec<(usize, f64)>, EvalError> {
    if seq.chosen.len() < k_max {
        return Err(EvalError::ShortSequence { have: seq.chosen.len(), need: k_max });
    }
    let first = if include_baseline { 0 } else { 1 };
    (first..=k_max)
        .map(|k| Ok((k, evaluator.pi_min(g, &seq.prefix(k), measurement_stream(run, k))?)))
        .collect()
}

/// Ordinary least-squares slope.
pub fn fit_beta(points: &[(usize, f64)]) -> Result<f64, EvalError> {
    if points.len() < 2 {
        return Err(EvalError::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        return Err(EvalError::DegenerateFit);
    }
    Ok(sxy / sxx)
}

/// Repetition settings for [`evaluate_beta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalProtocol {
    /// Independent runs T.
    pub runs: usize,
    pub k_max: usize,
    /// Drives initial seeds, seeder randomness and measurement randomness
    /// through separate derived streams.
    pub base_seed: u64,
    /// Also fit the `k = 0` point (initial seed only).
    pub include_baseline: bool,
}

impl Default for EvalProtocol {
    fn default() -> Self {
        EvalProtocol { runs: 20, k_max: 10, base_seed: 0, include_baseline: false }
    }
}

impl EvalProtocol {
    /// Initial seed of run `run`; identical for every algorithm evaluated on
    /// the same graph with the same base seed.
    pub fn round_init(&self, g: &Graph, run: usize) -> NodeId {
        replicate_rng(mix_seed(self.base_seed, INIT_TAG), run as u64).gen_range(0..g.node_count())
    }

    /// Randomness handed to the seeder in run `run`.
    pub fn seeder_seed(&self, run: usize) -> u64 {
        mix_seed(mix_seed(self.base_seed, SEEDER_TAG), run as u64)
    }

    /// Base seed for measurement Monte Carlo; disjoint from seeder streams.
    pub fn evaluation_seed(&self) -> u64 {
        mix_seed(self.base_seed, EVAL_TAG)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaResult {
    pub algorithm: String,
    pub slopes: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation over sqrt(T); 0 for a single run.
    pub se: f64,
    pub k_max: usize,
    /// Set when any run's slope is negative, a sign of estimator noise since
    /// exact access probabilities never decrease as seeds are added.
    pub negative_slope: bool,
}

impl BetaResult {
    pub fn from_slopes(algorithm: impl Into<String>, slopes: Vec<f64>, k_max: usize) -> Result<Self, EvalError> {
        if slopes.is_empty() {
            return Err(EvalError::NoRuns);
        }
        let t = slopes.len() as f64;
        let mean = slopes.iter().sum::<f64>() / t;
        let se = if slopes.len() > 1 {
            let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (t - 1.0);
            var.sqrt() / t.sqrt()
        } else {
            0.0
        };
        let negative_slope = slopes.iter().any(|&s| s < 0.0);
        Ok(BetaResult { algorithm: algorithm.into(), slopes, mean, se, k_max, negative_slope })
    }
}

/// Output of a single evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub sequence: SeedSequence,
    pub curve: Vec<(usize, f64)>,
    pub slope: f64,
}

/// One run of `strategy`: seed from the run's shared init, measure, fit.
pub fn evaluate_run(
    g: &Graph,
    strategy: &dyn SeedStrategy,
    evaluator: &dyn AccessEvaluator,
    protocol: &EvalProtocol,
    run: usize,
) -> Result<RunOutcome, EvalError> {
    let init = protocol.round_init(g, run);
    let sequence = strategy.select(g, init, protocol.k_max, protocol.seeder_seed(run))?;
    let curve = pi_min_curve(g, &sequence, evaluator, protocol.k_max, run, protocol.include_baseline)?;
    let slope = fit_beta(&curve)?;
    Ok(RunOutcome { sequence, curve, slope })
}

/// Mean slope of `protocol.runs` independent runs.
pub fn evaluate_beta(
    g: &Graph,
    strategy: &dyn SeedStrategy,
    evaluator: &dyn AccessEvaluator,
    protocol: &EvalProtocol,
) -> Result<BetaResult, EvalError> {
    if protocol.runs == 0 {
        return Err(EvalError::NoRuns);
    }
    let slopes = (0..protocol.runs)
        .map(|run| evaluate_run(g, strategy, evaluator, protocol, run).map(|r| r.slope))
        .collect::<Result<Vec<_>, _>>()?;
    BetaResult::from_slopes(strategy.name(), slopes, protocol.k_max)
}

/// Monte Carlo measurement oracle for a protocol, seeded from its evaluation stream.
pub fn measurement_oracle(alpha: f64, rounds: usize, protocol: &EvalProtocol) -> AccessOracle {
    AccessOracle::MonteCarlo(crate::cascade::CascadeConfig::new(alpha, rounds, protocol.evaluation_seed()))
}
