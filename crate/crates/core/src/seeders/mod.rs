//! Seed-selection algorithms for the maximin objective.
//!
//! Every algorithm starts from one initial seed (not counted against the
//! budget) and is driven one seed at a time through [`IncrementalSeeder`], so
//! a single length-`k` run yields all shorter prefixes. Ties are always
//! broken toward the lowest node id.

mod bfs;
mod prior;
mod pagerank;
mod topology;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{AccessOracle, CascadeConfig, CascadeError};
use crate::centrality::{CentralityError, PprParams};
use crate::graph::{Graph, NodeId};

pub use bfs::{bfs_access_estimate, bfs_access_update, MyopicBfs, NaiveMyopicBfs};
pub use prior::{Gonzalez, Myopic, NaiveMyopic, RandomSeeder};
pub use pagerank::{MyopicPpr, NaiveMyopicPpr};
pub use topology::{LeastCentral, LeastCentralNeighbor, MinDegree, MinDegreeVariant};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeedError {
    #[error("budget {k} exceeds the {available} available non-initial nodes")]
    BudgetTooLarge { k: usize, available: usize },
    #[error("initial seed {init} out of range for graph with {n} nodes")]
    InitOutOfRange { init: NodeId, n: usize },
    #[error("no further candidates after {} seeds: {found:?}", found.len())]
    Exhausted { found: Vec<NodeId> },
    #[error("unknown algorithm `{name}`; valid names: {valid}")]
    UnknownAlgorithm { name: String, valid: String },
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
}

/// The fourteen seeders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum AlgorithmId {
    Random,
    Gonzalez,
    Myopic,
    NaiveMyopic,
    MyopicBfs,
    NaiveMyopicBfs,
    MyopicPpr,
    NaiveMyopicPpr,
    LeastCentral,
    LeastCentralN,
    MinDegreeHc,
    MinDegreeHcn,
    MinDegreeNd,
    MinDegreeNdn,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 14] = [
        AlgorithmId::Random,
        AlgorithmId::Gonzalez,
        AlgorithmId::Myopic,
        AlgorithmId::NaiveMyopic,
        AlgorithmId::MyopicBfs,
        AlgorithmId::NaiveMyopicBfs,
        AlgorithmId::MyopicPpr,
        AlgorithmId::NaiveMyopicPpr,
        AlgorithmId::LeastCentral,
        AlgorithmId::LeastCentralN,
        AlgorithmId::MinDegreeHc,
        AlgorithmId::MinDegreeHcn,
        AlgorithmId::MinDegreeNd,
        AlgorithmId::MinDegreeNdn,
    ];

    /// Stable identifier used on the command line and in output files.
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Random => "random",
            AlgorithmId::Gonzalez => "gonzalez",
            AlgorithmId::Myopic => "myopic",
            AlgorithmId::NaiveMyopic => "naive_myopic",
            AlgorithmId::MyopicBfs => "myopic_bfs",
            AlgorithmId::NaiveMyopicBfs => "naive_myopic_bfs",
            AlgorithmId::MyopicPpr => "myopic_ppr",
            AlgorithmId::NaiveMyopicPpr => "naive_myopic_ppr",
            AlgorithmId::LeastCentral => "least_central",
            AlgorithmId::LeastCentralN => "least_central_n",
            AlgorithmId::MinDegreeHc => "min_degree_hc",
            AlgorithmId::MinDegreeHcn => "min_degree_hcn",
            AlgorithmId::MinDegreeNd => "min_degree_nd",
            AlgorithmId::MinDegreeNdn => "min_degree_ndn",
        }
    }

    /// Seeders that call the Monte Carlo estimator.
    pub fn uses_prob_est(self) -> bool {
        matches!(self, AlgorithmId::Myopic | AlgorithmId::NaiveMyopic)
    }

    /// The ten fast heuristics (everything except Random, Gonzalez and the
    /// two Monte Carlo seeders).
    pub fn is_fast_heuristic(self) -> bool {
        !matches!(
            self,
            AlgorithmId::Random | AlgorithmId::Gonzalez | AlgorithmId::Myopic | AlgorithmId::NaiveMyopic
        )
    }

    pub fn valid_names() -> String {
        AlgorithmId::ALL.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect()
}

impl FromStr for AlgorithmId {
    type Err = SeedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalize(s);
        let key = if key == "gonzales" { "gonzalez".to_string() } else { key };
        AlgorithmId::ALL
            .iter()
            .copied()
            .find(|a| normalize(a.name()) == key)
            .ok_or_else(|| SeedError::UnknownAlgorithm { name: s.to_string(), valid: AlgorithmId::valid_names() })
    }
}

impl From<AlgorithmId> for String {
    fn from(a: AlgorithmId) -> String {
        a.name().to_string()
    }
}

impl TryFrom<String> for AlgorithmId {
    type Error = SeedError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Ordered output of a seeder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSequence {
    pub algorithm: String,
    pub alpha: f64,
    pub rng_seed: u64,
    pub initial_seed: NodeId,
    /// Budgeted seeds in selection order.
    pub chosen: Vec<NodeId>,
}

impl SeedSequence {
    /// The initial seed followed by the first `k` chosen seeds.
    pub fn prefix(&self, k: usize) -> Vec<NodeId> {
        std::iter::once(self.initial_seed).chain(self.chosen.iter().take(k).copied()).collect()
    }
}

/// Knobs shared by the seeders; each algorithm reads only what it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeederParams {
    pub alpha: f64,
    /// Monte Carlo rounds for the ProbEst-based seeders.
    pub rounds: usize,
    pub rng_seed: u64,
    /// Replace Monte Carlo with exact enumeration (tiny graphs only).
    pub exact: bool,
    pub parallel: bool,
    pub ppr: PprParams,
}

impl SeederParams {
    pub fn new(alpha: f64) -> Self {
        SeederParams { alpha, rounds: 1000, rng_seed: 0, exact: false, parallel: true, ppr: PprParams::default() }
    }

    pub fn with_seed(mut self, rng_seed: u64) -> Self {
        self.rng_seed = rng_seed;
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn oracle(&self) -> AccessOracle {
        if self.exact {
            AccessOracle::Exact { alpha: self.alpha }
        } else {
            AccessOracle::MonteCarlo(CascadeConfig {
                alpha: self.alpha,
                rounds: self.rounds,
                rng_seed: self.rng_seed,
                parallel: self.parallel,
            })
        }
    }
}

/// A seeder that extends its sequence one node at a time.
pub trait IncrementalSeeder {
    fn next_seed(&mut self) -> Result<NodeId, SeedError>;
}

/// Seed bookkeeping shared by the implementations.
#[derive(Debug, Clone)]
pub(crate) struct SeedSet {
    pub order: Vec<NodeId>,
    pub member: Vec<bool>,
}

impl SeedSet {
    pub fn new(n: usize, init: NodeId) -> Self {
        let mut member = vec![false; n];
        member[init] = true;
        SeedSet { order: vec![init], member }
    }

    pub fn push(&mut self, v: NodeId) {
        debug_assert!(!self.member[v], "duplicate seed {v}");
        self.member[v] = true;
        self.order.push(v);
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.member[v]
    }

    pub fn chosen(&self) -> Vec<NodeId> {
        self.order[1..].to_vec()
    }
}

/// Lowest-scoring non-seed, ties toward the lowest id.
pub(crate) fn argmin_non_seed(scores: &[f64], seeds: &SeedSet) -> Option<NodeId> {
    let mut best: Option<NodeId> = None;
    for (v, &s) in scores.iter().enumerate() {
        if seeds.contains(v) {
            continue;
        }
        match best {
            Some(b) if scores[b] <= s => {}
            _ => best = Some(v),
        }
    }
    best
}

/// Non-seeds ordered by ascending score, ties by id.
pub(crate) fn ascending_non_seeds(scores: &[f64], seeds: &SeedSet) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..scores.len()).filter(|&v| !seeds.contains(v)).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    order
}

/// Highest-degree neighbor of `v`, ties toward the lowest id.
pub(crate) fn highest_degree_neighbor(g: &Graph, v: NodeId) -> Option<NodeId> {
    let mut best: Option<NodeId> = None;
    for &u in g.neighbors(v) {
        match best {
            Some(b) if g.degree(b) >= g.degree(u) => {}
            _ => best = Some(u),
        }
    }
    best
}

/// Builds the incremental seeder for `id`.
pub fn make_seeder<'g>(
    id: AlgorithmId,
    g: &'g Graph,
    init: NodeId,
    params: &SeederParams,
) -> Result<Box<dyn IncrementalSeeder + 'g>, SeedError> {
    let n = g.node_count();
    if init >= n {
        return Err(SeedError::InitOutOfRange { init, n });
    }
    Ok(match id {
        AlgorithmId::Random => Box::new(RandomSeeder::new(g, init, params.rng_seed)),
        AlgorithmId::Gonzalez => Box::new(Gonzalez::new(g, init)),
        AlgorithmId::Myopic => Box::new(Myopic::new(g, init, params.oracle())),
        AlgorithmId::NaiveMyopic => Box::new(NaiveMyopic::new(g, init, params.oracle())?),
        AlgorithmId::MyopicBfs => Box::new(MyopicBfs::new(g, init, params.alpha)),
        AlgorithmId::NaiveMyopicBfs => Box::new(NaiveMyopicBfs::new(g, init, params.alpha)),
        AlgorithmId::MyopicPpr => Box::new(MyopicPpr::new(g, init, params.ppr)),
        AlgorithmId::NaiveMyopicPpr => Box::new(NaiveMyopicPpr::new(g, init, params.ppr)?),
        AlgorithmId::LeastCentral => Box::new(LeastCentral::new(g, init)),
        AlgorithmId::LeastCentralN => Box::new(LeastCentralNeighbor::new(g, init)),
        AlgorithmId::MinDegreeHc => Box::new(MinDegree::new(g, init, MinDegreeVariant::Hc)),
        AlgorithmId::MinDegreeHcn => Box::new(MinDegree::new(g, init, MinDegreeVariant::Hcn)),
        AlgorithmId::MinDegreeNd => Box::new(MinDegree::new(g, init, MinDegreeVariant::Nd)),
        AlgorithmId::MinDegreeNdn => Box::new(MinDegree::new(g, init, MinDegreeVariant::Ndn)),
    })
}

/// Runs `id` for `k` budgeted seeds after `init`.
pub fn select_seeds(
    id: AlgorithmId,
    g: &Graph,
    init: NodeId,
    k: usize,
    params: &SeederParams,
) -> Result<SeedSequence, SeedError> {
    let available = g.node_count().saturating_sub(1);
    if k > available {
        return Err(SeedError::BudgetTooLarge { k, available });
    }
    let mut seeder = make_seeder(id, g, init, params)?;
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        chosen.push(seeder.next_seed()?);
    }
    Ok(SeedSequence { algorithm: id.name().to_string(), alpha: params.alpha, rng_seed: params.rng_seed, initial_seed: init, chosen })
}

/// Anything that can produce a seed sequence; lets evaluation code treat the
/// built-in algorithms and test doubles uniformly.
pub trait SeedStrategy: Sync {
    fn name(&self) -> String;

    fn select(&self, g: &Graph, init: NodeId, k: usize, rng_seed: u64) -> Result<SeedSequence, SeedError>;
}

/// A built-in algorithm bound to its parameters.
#[derive(Debug, Clone, Copy)]
pub struct Algorithm {
    pub id: AlgorithmId,
    pub params: SeederParams,
}

impl Algorithm {
    pub fn new(id: AlgorithmId, params: SeederParams) -> Self {
        Algorithm { id, params }
    }
}

impl SeedStrategy for Algorithm {
    fn name(&self) -> String {
        self.id.name().to_string()
    }

    fn select(&self, g: &Graph, init: NodeId, k: usize, rng_seed: u64) -> Result<SeedSequence, SeedError> {
        select_seeds(self.id, g, init, k, &self.params.with_seed(rng_seed))
    }
}
