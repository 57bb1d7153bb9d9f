//! Independent cascade simulation and access-probability estimation.
//!
//! Every replicate draws from its own ChaCha stream keyed by
//! `(rng_seed, replicate index)`, and replicates only contribute integer
//! activation counts. Serial and parallel runs therefore agree bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Largest edge count the exact oracle will enumerate.
pub const EXACT_MAX_EDGES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CascadeError {
    #[error("seed set is empty")]
    EmptySeeds,
    #[error("seed {node} out of range for graph with {n} nodes")]
    OutOfRange { node: NodeId, n: usize },
    #[error("transmission probability {0} outside [0, 1]")]
    InvalidAlpha(f64),
    #[error("simulation count must be at least 1")]
    ZeroRounds,
    #[error("exact enumeration refused: {0} edges exceeds the limit of {EXACT_MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("target fraction {target} outside (1/n, 1] for n = {n}")]
    TargetOutOfRange { target: f64, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    pub alpha: f64,
    pub rounds: usize,
    pub rng_seed: u64,
    pub parallel: bool,
}

impl CascadeConfig {
    pub fn new(alpha: f64, rounds: usize, rng_seed: u64) -> Self {
        CascadeConfig { alpha, rounds, rng_seed, parallel: true }
    }

    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn validate(&self) -> Result<(), CascadeError> {
        check_alpha(self.alpha)?;
        if self.rounds == 0 {
            return Err(CascadeError::ZeroRounds);
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<(), CascadeError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(CascadeError::InvalidAlpha(alpha))
    }
}

fn check_seeds(g: &Graph, seeds: &[NodeId]) -> Result<(), CascadeError> {
    if seeds.is_empty() {
        return Err(CascadeError::EmptySeeds);
    }
    let n = g.node_count();
    match seeds.iter().find(|&&s| s >= n) {
        Some(&node) => Err(CascadeError::OutOfRange { node, n }),
        None => Ok(()),
    }
}

/// SplitMix64 finalizer, used to derive independent seeds from a base seed
/// and a tag.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one replicate: stream `index` of the ChaCha key `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Bernoulli(alpha) via an integer threshold on a raw 64-bit draw.
#[derive(Debug, Clone, Copy)]
struct Coin {
    threshold: u64,
    always: bool,
}

impl Coin {
    fn new(alpha: f64) -> Self {
        Coin {
            threshold: (alpha * 18_446_744_073_709_551_616.0) as u64,
            always: alpha >= 1.0,
        }
    }

    #[inline]
    fn flip<R: RngCore>(&self, rng: &mut R) -> bool {
        self.always || rng.next_u64() < self.threshold
    }
}

/// Reusable scratch space for repeated cascades on one graph.
pub struct CascadeSim<'g> {
    graph: &'g Graph,
    stamp: Vec<u32>,
    epoch: u32,
    active: Vec<NodeId>,
}

impl<'g> CascadeSim<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        CascadeSim { graph, stamp: vec![0; graph.node_count()], epoch: 0, active: Vec::new() }
    }

    /// Runs one cascade and returns the activated nodes, seeds first, in
    /// activation order. Each edge leaving a newly activated node toward an
    /// inactive node is flipped exactly once.
    pub fn run<R: RngCore>(&mut self, seeds: &[NodeId], alpha: f64, rng: &mut R) -> &[NodeId] {
        self.run_with(seeds, Coin::new(alpha), rng)
    }

    fn run_with<R: RngCore>(&mut self, seeds: &[NodeId], coin: Coin, rng: &mut R) -> &[NodeId] {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.active.clear();
        for &s in seeds {
            if self.stamp[s] != epoch {
                self.stamp[s] = epoch;
                self.active.push(s);
            }
        }
        let mut head = 0;
        while head < self.active.len() {
            let u = self.active[head];
            head += 1;
            for &v in self.graph.neighbors(u) {
                if self.stamp[v] != epoch && coin.flip(rng) {
                    self.stamp[v] = epoch;
                    self.active.push(v);
                }
            }
        }
        &self.active
    }
}

/// One independent cascade from `seeds`.
pub fn simulate_cascade<R: RngCore>(
    g: &Graph,
    seeds: &[NodeId],
    alpha: f64,
    rng: &mut R,
) -> Result<Vec<NodeId>, CascadeError> {
    check_seeds(g, seeds)?;
    check_alpha(alpha)?;
    Ok(CascadeSim::new(g).run(seeds, alpha, rng).to_vec())
}

/// Per-node activation probabilities for a seed set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessEstimate {
    pub pi: Vec<f64>,
    pub seeds: Vec<NodeId>,
    pub alpha: f64,
    /// Monte Carlo rounds, or `None` for an exact computation.
    pub rounds: Option<usize>,
    pub rng_seed: Option<u64>,
}

impl AccessEstimate {
    /// Minimum over all nodes, seeds included.
    pub fn pi_min(&self) -> f64 {
        self.pi.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Activation counts over `rounds` replicates, replicate `r` using stream `r`.
fn activation_counts(g: &Graph, seeds: &[NodeId], cfg: &CascadeConfig) -> Vec<u64> {
    let n = g.node_count();
    let coin = Coin::new(cfg.alpha);
    let tally = |sim: &mut CascadeSim<'_>, counts: &mut [u64], r: usize| {
        let mut rng = replicate_rng(cfg.rng_seed, r as u64);
        for &v in sim.run_with(seeds, coin, &mut rng) {
            counts[v] += 1;
        }
    };
    if cfg.parallel {
        (0..cfg.rounds)
            .into_par_iter()
            .fold(|| (CascadeSim::new(g), vec![0u64; n]), |(mut sim, mut counts), r| {
                tally(&mut sim, &mut counts, r);
                (sim, counts)
            })
            .map(|(_, counts)| counts)
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    } else {
        let mut sim = CascadeSim::new(g);
        let mut counts = vec![0u64; n];
        (0..cfg.rounds).for_each(|r| tally(&mut sim, &mut counts, r));
        counts
    }
}

/// Monte Carlo estimate of every node's activation probability from `R`
/// independent cascades.
pub fn prob_est(g: &Graph, seeds: &[NodeId], cfg: &CascadeConfig) -> Result<AccessEstimate, CascadeError> {
    check_seeds(g, seeds)?;
    cfg.validate()?;
    let counts = activation_counts(g, seeds, cfg);
    let rounds = cfg.rounds as f64;
    Ok(AccessEstimate {
        pi: counts.into_iter().map(|c| c as f64 / rounds).collect(),
        seeds: seeds.to_vec(),
        alpha: cfg.alpha,
        rounds: Some(cfg.rounds),
        rng_seed: Some(cfg.rng_seed),
    })
}

/// Exact activation probabilities by enumerating every retained-edge subset.
/// Exponential in the edge count; refuses graphs above [`EXACT_MAX_EDGES`].
pub fn exact_access(g: &Graph, seeds: &[NodeId], alpha: f64) -> Result<AccessEstimate, CascadeError> {
    check_seeds(g, seeds)?;
    check_alpha(alpha)?;
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    let m = edges.len();
    if m > EXACT_MAX_EDGES {
        return Err(CascadeError::TooManyEdges(m));
    }
    let n = g.node_count();
    // incident[v] lists (edge index, other endpoint).
    let mut incident: Vec<Vec<(usize, NodeId)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push((i, v));
        incident[v].push((i, u));
    }
    let weight_by_kept: Vec<f64> = (0..=m)
        .map(|kept| alpha.powi(kept as i32) * (1.0 - alpha).powi((m - kept) as i32))
        .collect();

    let mut pi = vec![0.0; n];
    let mut reached = vec![false; n];
    let mut stack = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << m) {
        let w = weight_by_kept[mask.count_ones() as usize];
        if w == 0.0 {
            continue;
        }
        reached.iter_mut().for_each(|r| *r = false);
        stack.clear();
        for &s in seeds {
            if !reached[s] {
                reached[s] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &(e, v) in &incident[u] {
                if mask & (1 << e) != 0 && !reached[v] {
                    reached[v] = true;
                    stack.push(v);
                }
            }
        }
        for (p, &r) in pi.iter_mut().zip(&reached) {
            if r {
                *p += w;
            }
        }
    }
    for &s in seeds {
        pi[s] = 1.0;
    }
    Ok(AccessEstimate { pi, seeds: seeds.to_vec(), alpha, rounds: None, rng_seed: None })
}

/// Where access probabilities come from: Monte Carlo or exact enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AccessOracle {
    MonteCarlo(CascadeConfig),
    Exact { alpha: f64 },
}

impl AccessOracle {
    pub fn alpha(&self) -> f64 {
        match self {
            AccessOracle::MonteCarlo(cfg) => cfg.alpha,
            AccessOracle::Exact { alpha } => *alpha,
        }
    }

    /// Estimate for `seeds`; `stream` selects an independent random stream so
    /// repeated calls within one run do not share cascades.
    pub fn estimate(&self, g: &Graph, seeds: &[NodeId], stream: u64) -> Result<AccessEstimate, CascadeError> {
        match self {
            AccessOracle::MonteCarlo(cfg) => {
                let cfg = CascadeConfig { rng_seed: mix_seed(cfg.rng_seed, stream), ..*cfg };
                prob_est(g, seeds, &cfg)
            }
            AccessOracle::Exact { alpha } => exact_access(g, seeds, *alpha),
        }
    }
}

/// Mean fraction of nodes activated from a uniformly random single seed,
/// redrawn for each of the `rounds` trials.
pub fn spreadability(g: &Graph, alpha: f64, rounds: usize, rng_seed: u64, parallel: bool) -> Result<f64, CascadeError> {
    check_alpha(alpha)?;
    if rounds == 0 {
        return Err(CascadeError::ZeroRounds);
    }
    let n = g.node_count();
    let coin = Coin::new(alpha);
    let trial = |sim: &mut CascadeSim<'_>, t: usize| -> u64 {
        let mut rng = replicate_rng(rng_seed, t as u64);
        let seed = rng.gen_range(0..n);
        sim.run_with(&[seed], coin, &mut rng).len() as u64
    };
    let total: u64 = if parallel {
        (0..rounds)
            .into_par_iter()
            .map_init(|| CascadeSim::new(g), |sim, t| trial(sim, t))
            .sum()
    } else {
        let mut sim = CascadeSim::new(g);
        (0..rounds).map(|t| trial(&mut sim, t)).sum()
    };
    Ok(total as f64 / (rounds as f64 * n as f64))
}

/// Target activation fraction for the three spreadability settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Low,
    Medium,
    High,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Low, Regime::Medium, Regime::High];

    pub fn target(self) -> f64 {
        match self {
            Regime::Low => 0.2,
            Regime::Medium => 0.5,
            Regime::High => 0.8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::Medium => "medium",
            Regime::High => "high",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(Regime::Low),
            "medium" | "med" => Ok(Regime::Medium),
            "high" => Ok(Regime::High),
            other => Err(format!("unknown spreadability regime `{other}` (expected low, medium or high)")),
        }
    }
}

/// The alpha grid 0.01, 0.02, ..., 0.99.
pub fn alpha_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadabilityCurve {
    /// `(alpha, fraction)` pairs sorted by alpha.
    pub points: Vec<(f64, f64)>,
    pub rounds: usize,
}

pub fn spreadability_curve(
    g: &Graph,
    grid: &[f64],
    rounds: usize,
    rng_seed: u64,
    parallel: bool,
) -> Result<SpreadabilityCurve, CascadeError> {
    let mut alphas = grid.to_vec();
    alphas.sort_by(f64::total_cmp);
    let points = alphas
        .into_iter()
        .map(|a| spreadability(g, a, rounds, rng_seed, parallel).map(|f| (a, f)))
        .collect::<Result<_, _>>()?;
    Ok(SpreadabilityCurve { points, rounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CalibrationMethod {
    /// Evaluate every grid point.
    #[default]
    Grid,
    /// Binary search assuming a monotone curve.
    Bisection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub alpha: f64,
    pub achieved: f64,
    pub target: f64,
    /// Set when even the largest grid alpha falls short of the target.
    pub unreachable: bool,
    /// Evaluated points; the full grid unless bisection was used.
    pub curve: SpreadabilityCurve,
}

/// Picks the grid alpha whose spreadability is closest to `target`, ties
/// going to the smaller alpha.
pub fn calibrate_alpha(
    g: &Graph,
    target: f64,
    rounds: usize,
    grid: &[f64],
    rng_seed: u64,
    method: CalibrationMethod,
) -> Result<Calibration, CascadeError> {
    let n = g.node_count();
    if !(target >= 1.0 / n as f64 && target <= 1.0) {
        return Err(CascadeError::TargetOutOfRange { target, n });
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let curve = match method {
        CalibrationMethod::Grid => spreadability_curve(g, &grid, rounds, rng_seed, true)?,
        CalibrationMethod::Bisection => bisect_curve(g, &grid, target, rounds, rng_seed)?,
    };
    Ok(pick_alpha(curve, target))
}

/// Chooses the closest point of an already measured curve.
pub fn pick_alpha(curve: SpreadabilityCurve, target: f64) -> Calibration {
    let &(top_alpha, top_f) = curve.points.last().expect("non-empty grid");
    if top_f < target {
        log::warn!("target spreadability {target} unreachable: f({top_alpha}) = {top_f}");
        return Calibration { alpha: top_alpha, achieved: top_f, target, unreachable: true, curve };
    }
    let mut best = curve.points[0];
    for &(a, f) in &curve.points[1..] {
        if (f - target).abs() < (best.1 - target).abs() {
            best = (a, f);
        }
    }
    Calibration { alpha: best.0, achieved: best.1, target, unreachable: false, curve }
}

fn bisect_curve(
    g: &Graph,
    grid: &[f64],
    target: f64,
    rounds: usize,
    rng_seed: u64,
) -> Result<SpreadabilityCurve, CascadeError> {
    let mut memo: Vec<Option<f64>> = vec![None; grid.len()];
    let mut eval = |i: usize| -> Result<f64, CascadeError> {
        if let Some(f) = memo[i] {
            return Ok(f);
        }
        let f = spreadability(g, grid[i], rounds, rng_seed, true)?;
        memo[i] = Some(f);
        Ok(f)
    };
    // First index with f >= target, then its left neighbor.
    let (mut lo, mut hi) = (0usize, grid.len() - 1);
    eval(hi)?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if eval(mid)? >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    eval(lo)?;
    if lo > 0 {
        eval(lo - 1)?;
    }
    let points = grid.iter().zip(&memo).filter_map(|(&a, f)| f.map(|f| (a, f))).collect();
    Ok(SpreadabilityCurve { points, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn sigma(p: f64, r: usize) -> f64 {
        (p * (1.0 - p) / r as f64).sqrt()
    }

    #[test]
    fn alpha_zero_activates_only_seeds() {
        let g = generate::cycle(6);
        let mut rng = replicate_rng(1, 0);
        assert_eq!(simulate_cascade(&g, &[2], 0.0, &mut rng).unwrap(), vec![2]);
    }

    #[test]
    fn alpha_one_activates_component() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut rng = replicate_rng(1, 0);
        let mut got = simulate_cascade(&g, &[0], 1.0, &mut rng).unwrap();
        got.sort_unstable();
        assert_eq!(got, vec![0, 1, 2]);
        let est = prob_est(&g, &[0], &CascadeConfig::new(1.0, 50, 3)).unwrap();
        assert_eq!(est.pi, vec![1.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_seeds_rejected() {
        let g = generate::path(3);
        let mut rng = replicate_rng(1, 0);
        assert_eq!(simulate_cascade(&g, &[], 0.5, &mut rng), Err(CascadeError::EmptySeeds));
        assert!(prob_est(&g, &[], &CascadeConfig::new(0.5, 10, 0)).is_err());
        assert!(prob_est(&g, &[0], &CascadeConfig::new(1.5, 10, 0)).is_err());
        assert!(prob_est(&g, &[0], &CascadeConfig::new(0.5, 0, 0)).is_err());
    }

    #[test]
    fn path_end_reached_with_quarter_probability() {
        let g = generate::path(3);
        let r = 10_000;
        let hits = (0..r)
            .filter(|&i| {
                let mut rng = replicate_rng(99, i as u64);
                simulate_cascade(&g, &[0], 0.5, &mut rng).unwrap().len() == 3
            })
            .count();
        let p = hits as f64 / r as f64;
        assert!((p - 0.25).abs() <= 3.0 * sigma(0.25, r), "{p}");
    }

    #[test]
    fn exact_oracle_small_cases() {
        let p3 = exact_access(&generate::path(3), &[0], 0.5).unwrap();
        assert_eq!(p3.pi, vec![1.0, 0.5, 0.25]);
        let k3 = exact_access(&generate::complete(3), &[0], 0.5).unwrap();
        assert_eq!(k3.pi, vec![1.0, 0.625, 0.625]);
        let zero = exact_access(&generate::cycle(5), &[1, 3], 0.0).unwrap();
        assert_eq!(zero.pi, vec![0.0, 1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn exact_oracle_refuses_large_graphs() {
        let g = generate::complete(7);
        assert_eq!(exact_access(&g, &[0], 0.5), Err(CascadeError::TooManyEdges(21)));
    }

    #[test]
    fn prob_est_matches_closed_forms() {
        let r = 100_000;
        let p3 = prob_est(&generate::path(3), &[0], &CascadeConfig::new(0.5, r, 5)).unwrap();
        for (got, want) in p3.pi.iter().zip([1.0, 0.5, 0.25]) {
            assert!((got - want).abs() <= 3.0 * sigma(want, r) + 1e-12, "{got} vs {want}");
        }
        let k3 = prob_est(&generate::complete(3), &[0], &CascadeConfig::new(0.5, r, 6)).unwrap();
        for &got in &k3.pi[1..] {
            assert!((got - 0.625).abs() <= 3.0 * sigma(0.625, r));
        }
    }

    #[test]
    fn prob_est_independent_of_parallelism() {
        let g = generate::gnm(60, 150, 4);
        let cfg = CascadeConfig::new(0.3, 3000, 17);
        let par = prob_est(&g, &[0, 5], &cfg).unwrap();
        let ser = prob_est(&g, &[0, 5], &cfg.serial()).unwrap();
        assert_eq!(par, ser);
    }

    #[test]
    fn spreadability_endpoints() {
        let g = generate::cycle(8);
        assert_eq!(spreadability(&g, 0.0, 100, 1, true).unwrap(), 1.0 / 8.0);
        assert_eq!(spreadability(&g, 1.0, 100, 1, false).unwrap(), 1.0);
    }

    #[test]
    fn spreadability_path_three() {
        // Per-seed expected sizes 1.75, 2.0, 1.75 from the exact oracle.
        let g = generate::path(3);
        let expected: f64 = (0..3)
            .map(|s| exact_access(&g, &[s], 0.5).unwrap().pi.iter().sum::<f64>())
            .sum::<f64>()
            / 9.0;
        assert!((expected - 0.6111111111111112).abs() < 1e-12);
        let r = 100_000;
        let f = spreadability(&g, 0.5, r, 8, true).unwrap();
        // Fraction per trial lies in [1/3, 1]; its std dev is below 1/3.
        assert!((f - expected).abs() <= 3.0 * (1.0 / 3.0) / (r as f64).sqrt(), "{f}");
    }

    #[test]
    fn calibration_extremes() {
        let g = generate::path(4);
        let low = calibrate_alpha(&g, 0.25, 200, &alpha_grid(), 1, CalibrationMethod::Grid).unwrap();
        assert_eq!(low.alpha, 0.01);
        assert_eq!(low.curve.points.len(), 99);

        // A curve that only reaches the target at the top grid point.
        let curve = SpreadabilityCurve { points: vec![(0.97, 0.9), (0.98, 0.95), (0.99, 0.999)], rounds: 1 };
        let top = pick_alpha(curve, 0.99);
        assert_eq!(top.alpha, 0.99);
        assert!(!top.unreachable);

        let short = SpreadabilityCurve { points: vec![(0.98, 0.5), (0.99, 0.6)], rounds: 1 };
        let c = pick_alpha(short, 0.8);
        assert!(c.unreachable);
        assert_eq!(c.alpha, 0.99);

        assert!(calibrate_alpha(&g, 0.1, 10, &alpha_grid(), 1, CalibrationMethod::Grid).is_err());
    }

    #[test]
    fn ties_go_to_smaller_alpha() {
        let curve = SpreadabilityCurve { points: vec![(0.1, 0.4), (0.2, 0.6), (0.3, 0.7)], rounds: 1 };
        assert_eq!(pick_alpha(curve, 0.5).alpha, 0.1);
    }

    #[test]
    fn bisection_agrees_with_grid_on_monotone_curve() {
        let g = generate::cycle(30);
        let grid = alpha_grid();
        let full = calibrate_alpha(&g, 0.5, 400, &grid, 3, CalibrationMethod::Grid).unwrap();
        let fast = calibrate_alpha(&g, 0.5, 400, &grid, 3, CalibrationMethod::Bisection).unwrap();
        assert!(fast.curve.points.len() < 20);
        assert!((fast.alpha - full.alpha).abs() <= 0.02, "{} vs {}", fast.alpha, full.alpha);
    }

    #[test]
    fn regime_parse() {
        assert_eq!("Medium".parse::<Regime>().unwrap(), Regime::Medium);
        assert!("extreme".parse::<Regime>().is_err());
    }
}
