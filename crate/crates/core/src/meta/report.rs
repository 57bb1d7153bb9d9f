use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BetaTable, MetaError};
use crate::seeders::AlgorithmId;

/// The algorithm picked for one network and what picking it cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaSelection {
    pub network: String,
    pub selected: AlgorithmId,
    /// Model inference time; zero for oracle selections.
    pub inference_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaReportRow {
    pub network: String,
    pub selected_alg: AlgorithmId,
    pub beta_selected: f64,
    pub beta_myopic: f64,
    /// `None` when the baseline slope is zero.
    pub perf_diff_pct: Option<f64>,
    /// Selected algorithm runtime plus inference.
    pub t_selected_ms: f64,
    pub t_myopic_ms: f64,
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaReport {
    /// Sorted by network name.
    pub rows: Vec<MetaReportRow>,
    pub mean_perf_diff_pct: f64,
    pub std_perf_diff_pct: f64,
    pub mean_speedup: f64,
    pub std_speedup: f64,
    /// Networks where the selected algorithm's slope exceeds the baseline's.
    pub beats_myopic: usize,
    /// Networks left out of the percentage aggregate for a zero baseline.
    pub excluded_zero_baseline: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// network -> algorithm -> mean runtime in milliseconds.
pub type TimingTable = BTreeMap<String, BTreeMap<AlgorithmId, f64>>;

/// Per-network and aggregate comparison of selected algorithms with Myopic.
pub fn build_meta_report(
    selections: &[MetaSelection],
    betas: &BetaTable,
    timings: &TimingTable,
) -> Result<MetaReport, MetaError> {
    let beta = |net: &str, alg: AlgorithmId| {
        betas.get(net).and_then(|r| r.get(&alg)).copied().ok_or_else(|| MetaError::MissingBeta {
            network: net.to_string(),
            algorithm: alg.name().to_string(),
        })
    };
    let time = |net: &str, alg: AlgorithmId| {
        let t = timings.get(net).and_then(|r| r.get(&alg)).copied().ok_or_else(|| MetaError::MissingTiming {
            network: net.to_string(),
            algorithm: alg.name().to_string(),
        })?;
        if t > 0.0 {
            Ok(t)
        } else {
            Err(MetaError::InvalidTiming { network: net.to_string(), algorithm: alg.name().to_string() })
        }
    };

    let mut sorted: Vec<&MetaSelection> = selections.iter().collect();
    sorted.sort_by(|a, b| a.network.cmp(&b.network));
    let mut rows = Vec::with_capacity(sorted.len());
    for s in sorted {
        let beta_selected = beta(&s.network, s.selected)?;
        let beta_myopic = beta(&s.network, AlgorithmId::Myopic)?;
        let t_selected_ms = time(&s.network, s.selected)? + s.inference_ms.max(0.0);
        let t_myopic_ms = time(&s.network, AlgorithmId::Myopic)?;
        let perf_diff_pct = (beta_myopic != 0.0).then(|| (beta_selected - beta_myopic) / beta_myopic * 100.0);
        rows.push(MetaReportRow {
            network: s.network.clone(),
            selected_alg: s.selected,
            beta_selected,
            beta_myopic,
            perf_diff_pct,
            t_selected_ms,
            t_myopic_ms,
            speedup: t_myopic_ms / t_selected_ms,
        });
    }
    let diffs: Vec<f64> = rows.iter().filter_map(|r| r.perf_diff_pct).collect();
    let speedups: Vec<f64> = rows.iter().map(|r| r.speedup).collect();
    let (mean_perf_diff_pct, std_perf_diff_pct) = mean_std(&diffs);
    let (mean_speedup, std_speedup) = mean_std(&speedups);
    Ok(MetaReport {
        beats_myopic: rows.iter().filter(|r| r.beta_selected > r.beta_myopic).count(),
        excluded_zero_baseline: rows.len() - diffs.len(),
        rows,
        mean_perf_diff_pct,
        std_perf_diff_pct,
        mean_speedup,
        std_speedup,
    })
}
