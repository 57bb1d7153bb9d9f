use std::path::Path;

use anyhow::{bail, Context};
use maximin::eval::EvalProtocol;
use maximin::graph::load_edge_list;
use maximin::seeders::{select_seeds, SeederParams};
use maximin::AlgorithmId;
use serde_json::json;

use super::label_json;

pub struct SeedRequest<'a> {
    pub network: &'a Path,
    pub algorithm: AlgorithmId,
    pub alpha: f64,
    pub k: usize,
    /// Node label from the edge list; drawn from `rng_seed` when absent.
    pub init: Option<String>,
    pub rng_seed: u64,
    pub rounds: usize,
    pub exact: bool,
    pub lcc: bool,
}

/// Runs one seeder and renders its sequence, with node labels from the file.
pub fn cmd_seed(req: &SeedRequest) -> anyhow::Result<serde_json::Value> {
    if !(0.0..=1.0).contains(&req.alpha) {
        bail!("alpha must lie in [0, 1], got {}", req.alpha);
    }
    let g = load_edge_list(req.network, req.lcc).with_context(|| format!("loading {}", req.network.display()))?;
    let init = match &req.init {
        Some(label) => g
            .labels()
            .iter()
            .position(|l| l == label)
            .with_context(|| format!("node `{label}` not in {}", req.network.display()))?,
        None => EvalProtocol { base_seed: req.rng_seed, ..Default::default() }.round_init(&g, 0),
    };
    let mut params = SeederParams::new(req.alpha).with_seed(req.rng_seed).with_rounds(req.rounds);
    if req.exact {
        params = params.exact();
    }
    let seq = select_seeds(req.algorithm, &g, init, req.k, &params)?;
    Ok(json!({
        "algorithm": seq.algorithm,
        "network": g.name().unwrap_or_default(),
        "alpha": seq.alpha,
        "rng_seed": seq.rng_seed,
        "initial_seed": label_json(g.label(seq.initial_seed)),
        "seeds": seq.chosen.iter().map(|&v| label_json(g.label(v))).collect::<Vec<_>>(),
    }))
}
