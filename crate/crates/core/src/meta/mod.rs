//! Algorithm-portfolio selection: greedy ensemble construction, the
//! evaluate-everything oracle, and a feature-driven classifier.

pub mod forest;
mod model;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::Regime;
use crate::eval::{evaluate_beta, evaluate_run, AccessEvaluator, EvalError, EvalProtocol};
use crate::graph::Graph;
use crate::seeders::{Algorithm, AlgorithmId, SeedSequence, SeedStrategy, SeederParams};

pub use model::{meta_predict, train_meta, LabeledNetwork, MetaModel, TrainingManifest, MODEL_FORMAT, MODEL_VERSION};
pub use report::{build_meta_report, MetaReport, MetaReportRow, MetaSelection, TimingTable};

pub const DEFAULT_ENSEMBLE_SIZE: usize = 5;

/// Fraction of the baseline slope an algorithm must reach to cover a network.
pub const COVERAGE_RATIO: f64 = 0.8;

#[derive(Debug, Error)]
pub enum MetaError {
    #[error("ensemble of size {size} requested but only {available} candidate algorithms")]
    TooFewCandidates { size: usize, available: usize },
    #[error("no beta for `{algorithm}` on network `{network}`")]
    MissingBeta { network: String, algorithm: String },
    #[error("no timing for `{algorithm}` on network `{network}`")]
    MissingTiming { network: String, algorithm: String },
    #[error("timing for `{algorithm}` on network `{network}` is not positive")]
    InvalidTiming { network: String, algorithm: String },
    #[error("training needs at least {min} labeled networks, got {got}")]
    TooFewNetworks { min: usize, got: usize },
    #[error("label `{label}` is not a member of the ensemble")]
    LabelOutsideEnsemble { label: String },
    #[error("ensemble contains `{0}`, which is reserved as the baseline")]
    BaselineInEnsemble(String),
    #[error("feature vector has {got} columns, model expects {expected}")]
    FeatureWidth { expected: usize, got: usize },
    #[error("unsupported model file: {0}")]
    ModelFormat(String),
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// network -> algorithm -> beta.
pub type BetaTable = BTreeMap<String, BTreeMap<AlgorithmId, f64>>;

/// A fixed-size algorithm portfolio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSet {
    /// In selection order.
    pub members: Vec<AlgorithmId>,
    pub regime: Option<Regime>,
    /// Networks covered on the selection corpus.
    pub coverage: usize,
    /// Networks whose baseline slope is not positive; every algorithm with a
    /// non-negative slope covers them.
    pub degenerate_networks: Vec<String>,
}

impl EnsembleSet {
    /// Checks the portfolio invariants.
    pub fn validate(&self) -> Result<(), MetaError> {
        if self.members.is_empty() {
            return Err(MetaError::EmptyEnsemble);
        }
        for &m in &self.members {
            if matches!(m, AlgorithmId::Myopic | AlgorithmId::NaiveMyopic) {
                return Err(MetaError::BaselineInEnsemble(m.name().to_string()));
            }
        }
        Ok(())
    }

    pub fn contains(&self, id: AlgorithmId) -> bool {
        self.members.contains(&id)
    }

    /// One of the three published portfolios, for skipping selection.
    pub fn preset(regime: Regime) -> EnsembleSet {
        use AlgorithmId::*;
        let members = match regime {
            Regime::Low => vec![Gonzalez, MyopicBfs, MyopicPpr, MinDegreeHcn, MinDegreeNdn],
            Regime::Medium => vec![Gonzalez, MyopicBfs, MyopicPpr, MinDegreeHc, MinDegreeHcn],
            Regime::High => vec![Gonzalez, LeastCentral, MyopicBfs, NaiveMyopicBfs, MinDegreeHc],
        };
        EnsembleSet { members, regime: Some(regime), coverage: 0, degenerate_networks: Vec::new() }
    }
}

fn covers(beta: f64, beta_myopic: f64) -> bool {
    beta >= COVERAGE_RATIO * beta_myopic
}

/// Networks on which `id` covers the baseline.
pub fn covered_networks(id: AlgorithmId, table: &BetaTable, beta_myopic: &BTreeMap<String, f64>) -> BTreeSet<String> {
    table
        .iter()
        .filter_map(|(net, row)| {
            let (b, m) = (row.get(&id)?, beta_myopic.get(net)?);
            covers(*b, *m).then(|| net.clone())
        })
        .collect()
}

/// Number of networks covered by at least one member of `set`.
pub fn coverage(set: &[AlgorithmId], table: &BetaTable, beta_myopic: &BTreeMap<String, f64>) -> usize {
    let mut union = BTreeSet::new();
    for &id in set {
        union.extend(covered_networks(id, table, beta_myopic));
    }
    union.len()
}

/// Greedy forward max-coverage: repeatedly add the candidate covering the
/// most not-yet-covered networks, ties by [`AlgorithmId`] order.
pub fn select_ensemble(
    table: &BetaTable,
    beta_myopic: &BTreeMap<String, f64>,
    size: usize,
) -> Result<EnsembleSet, MetaError> {
    let candidates: BTreeSet<AlgorithmId> = table
        .values()
        .flat_map(|row| row.keys().copied())
        .filter(|id| !matches!(id, AlgorithmId::Myopic | AlgorithmId::NaiveMyopic))
        .collect();
    if candidates.len() < size {
        return Err(MetaError::TooFewCandidates { size, available: candidates.len() });
    }
    let covered_by: BTreeMap<AlgorithmId, BTreeSet<String>> =
        candidates.iter().map(|&id| (id, covered_networks(id, table, beta_myopic))).collect();
    let mut members = Vec::with_capacity(size);
    let mut covered: BTreeSet<String> = BTreeSet::new();
    while members.len() < size {
        let mut best: Option<(AlgorithmId, usize)> = None;
        for (&id, nets) in &covered_by {
            if members.contains(&id) {
                continue;
            }
            let gain = nets.difference(&covered).count();
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((id, gain));
            }
        }
        let (id, _) = best.expect("enough candidates checked above");
        covered.extend(covered_by[&id].iter().cloned());
        members.push(id);
    }
    let degenerate_networks = beta_myopic.iter().filter(|(_, &b)| b <= 0.0).map(|(n, _)| n.clone()).collect();
    Ok(EnsembleSet { members, regime: None, coverage: covered.len(), degenerate_networks })
}

/// Outcome of [`fast_ensemble_oracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleChoice {
    /// Index of the winner in the member list.
    pub index: usize,
    pub name: String,
    pub beta: f64,
    /// Every member's mean slope, in member order.
    pub betas: Vec<f64>,
    /// The winner's sequence from the protocol's first run.
    pub sequence: SeedSequence,
}

/// Evaluates every member and keeps the highest mean slope; ties go to the
/// earlier member.
pub fn fast_ensemble_oracle_with(
    g: &Graph,
    members: &[&dyn SeedStrategy],
    evaluator: &dyn AccessEvaluator,
    protocol: &EvalProtocol,
) -> Result<OracleChoice, MetaError> {
    if members.is_empty() {
        return Err(MetaError::EmptyEnsemble);
    }
    let betas = members
        .par_iter()
        .map(|s| evaluate_beta(g, *s, evaluator, protocol).map(|b| b.mean))
        .collect::<Result<Vec<_>, _>>()?;
    let mut index = 0;
    for (i, &b) in betas.iter().enumerate() {
        if b > betas[index] {
            index = i;
        }
    }
    let sequence = evaluate_run(g, members[index], evaluator, protocol, 0)?.sequence;
    Ok(OracleChoice { index, name: members[index].name(), beta: betas[index], betas, sequence })
}

/// [`fast_ensemble_oracle_with`] over a portfolio of built-in algorithms,
/// with members considered in [`AlgorithmId`] order.
pub fn fast_ensemble_oracle(
    g: &Graph,
    ensemble: &EnsembleSet,
    params: &SeederParams,
    evaluator: &dyn AccessEvaluator,
    protocol: &EvalProtocol,
) -> Result<(AlgorithmId, OracleChoice), MetaError> {
    ensemble.validate()?;
    let mut ids = ensemble.members.clone();
    ids.sort();
    let algs: Vec<Algorithm> = ids.iter().map(|&id| Algorithm::new(id, *params)).collect();
    let members: Vec<&dyn SeedStrategy> = algs.iter().map(|a| a as &dyn SeedStrategy).collect();
    let choice = fast_ensemble_oracle_with(g, &members, evaluator, protocol)?;
    Ok((ids[choice.index], choice))
}
