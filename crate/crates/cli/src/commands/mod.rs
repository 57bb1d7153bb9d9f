pub mod bench;
pub mod calibrate;
pub mod features;
pub mod meta;
pub mod report;
pub mod seed;

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use maximin::cascade::{mix_seed, Regime};
use maximin::eval::EvalProtocol;
use maximin::AlgorithmId;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::tables::{read_csv, CalibrationRow, ResultRow};

pub const CALIBRATION_CSV: &str = "calibration.csv";
pub const RESULTS_CSV: &str = "results.csv";
pub const TIMING_CSV: &str = "timing.csv";
pub const NETWORKS_CSV: &str = "networks.csv";

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Some inputs were skipped; the message lists them.
    Partial(String),
}

impl Status {
    pub fn from_failures(what: &str, failures: &[String]) -> Status {
        if failures.is_empty() {
            Status::Complete
        } else {
            Status::Partial(format!("{} {what} failed: {}", failures.len(), failures.join("; ")))
        }
    }
}

/// Platform-independent 64-bit hash of a string.
pub fn stable_hash(s: &str) -> u64 {
    let digest = Sha256::digest(s.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Evaluation protocol for one network; independent of algorithm and regime
/// so every algorithm sees the same per-run initial seeds.
pub fn protocol_for(cfg: &RunConfig, network: &str) -> EvalProtocol {
    EvalProtocol {
        runs: cfg.runs,
        k_max: cfg.k_max,
        base_seed: mix_seed(cfg.seed, stable_hash(network)),
        include_baseline: false,
    }
}

/// Fails with a message naming the missing artifact.
pub fn require_artifact(path: &Path, produced_by: &str) -> anyhow::Result<()> {
    if !path.exists() {
        bail!("missing artifact {} (run `maximin {produced_by}` first)", path.display());
    }
    Ok(())
}

/// (network, regime) -> calibrated alpha.
pub fn load_calibration(cfg: &RunConfig) -> anyhow::Result<BTreeMap<(String, Regime), f64>> {
    let path = cfg.out_file(CALIBRATION_CSV);
    require_artifact(&path, "calibrate")?;
    let mut table = BTreeMap::new();
    for row in read_csv::<CalibrationRow>(&path)? {
        let regime: Regime = row.regime.parse().map_err(anyhow::Error::msg)?;
        table.insert((row.network, regime), row.alpha);
    }
    Ok(table)
}

/// (network, regime, algorithm) -> per-run slopes in run order.
pub type SlopeTable = BTreeMap<(String, Regime, AlgorithmId), Vec<f64>>;

pub fn load_results(cfg: &RunConfig) -> anyhow::Result<SlopeTable> {
    let path = cfg.out_file(RESULTS_CSV);
    require_artifact(&path, "bench")?;
    let mut rows = read_csv::<ResultRow>(&path)?;
    rows.sort_by_key(|r| r.run);
    let mut table: SlopeTable = BTreeMap::new();
    for r in rows {
        let regime: Regime = r.spreadability.parse().map_err(anyhow::Error::msg)?;
        let alg: AlgorithmId = r.algorithm.parse().with_context(|| format!("in {}", path.display()))?;
        table.entry((r.network, regime, alg)).or_default().push(r.slope);
    }
    Ok(table)
}

/// Best node label rendering for JSON: integers stay numeric.
pub fn label_json(label: &str) -> serde_json::Value {
    match label.parse::<i64>() {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(label),
    }
}
