use std::collections::{BTreeMap, BTreeSet};

use anyhow::bail;
use maximin::cascade::Regime;
use maximin::eval::{categorize, BetaResult};
use maximin::AlgorithmId;

use super::{load_results, require_artifact, NETWORKS_CSV, TIMING_CSV};
use crate::config::RunConfig;
use crate::tables::{read_csv, read_csv_lenient, write_atomic, write_csv, AggregateRow, BestCountRow, BestRow, NetworkRow, TimingRow};

pub const AGGREGATE_CSV: &str = "aggregate.csv";
pub const CATEGORY_MATRIX_CSV: &str = "category_matrix.csv";
pub const BEST_CSV: &str = "best_per_network.csv";
pub const BEST_COUNTS_CSV: &str = "best_counts.csv";

/// (network, regime, algorithm) -> beta over runs.
pub type BetaResults = BTreeMap<(String, Regime, AlgorithmId), BetaResult>;

pub fn beta_results(cfg: &RunConfig) -> anyhow::Result<BetaResults> {
    load_results(cfg)?
        .into_iter()
        .map(|((net, regime, alg), slopes)| Ok(((net, regime, alg), BetaResult::from_slopes(alg.name(), slopes, cfg.k_max)?)))
        .collect()
}

/// Highest mean slope among `candidates`, ties toward [`AlgorithmId`] order.
pub fn best_of(betas: &BetaResults, net: &str, regime: Regime, candidates: &[AlgorithmId]) -> Option<(AlgorithmId, f64)> {
    let mut sorted = candidates.to_vec();
    sorted.sort();
    let mut best: Option<(AlgorithmId, f64)> = None;
    for alg in sorted {
        if let Some(b) = betas.get(&(net.to_string(), regime, alg)) {
            if best.is_none_or(|(_, m)| b.mean > m) {
                best = Some((alg, b.mean));
            }
        }
    }
    best
}

pub struct ReportOutcome {
    pub aggregate: Vec<AggregateRow>,
    pub best: Vec<BestRow>,
    pub counts: Vec<BestCountRow>,
}

/// Builds the category matrix and best-algorithm tables from bench output.
pub fn cmd_report(cfg: &RunConfig) -> anyhow::Result<ReportOutcome> {
    let betas = beta_results(cfg)?;
    let networks_path = cfg.out_file(NETWORKS_CSV);
    require_artifact(&networks_path, "bench")?;
    let networks: BTreeMap<String, NetworkRow> =
        read_csv::<NetworkRow>(&networks_path)?.into_iter().map(|r| (r.network.clone(), r)).collect();
    let timing: BTreeMap<(String, String, String), f64> = read_csv_lenient::<TimingRow>(&cfg.out_file(TIMING_CSV))?
        .into_iter()
        .map(|r| ((r.network, r.spreadability, r.algorithm), r.mean_ms))
        .collect();

    let pairs: BTreeSet<(String, Regime)> = betas.keys().map(|(n, r, _)| (n.clone(), *r)).collect();
    let missing: Vec<String> = pairs
        .iter()
        .filter(|(n, r)| !betas.contains_key(&(n.clone(), *r, AlgorithmId::Myopic)))
        .map(|(n, r)| format!("{n} ({r})"))
        .collect();
    if !missing.is_empty() {
        bail!("no myopic results for networks: {}", missing.join(", "));
    }
    let algorithms: BTreeSet<AlgorithmId> = betas.keys().map(|k| k.2).collect();
    let regimes: BTreeSet<Regime> = pairs.iter().map(|p| p.1).collect();

    let mut aggregate = Vec::new();
    for ((net, regime, alg), b) in &betas {
        let myo = &betas[&(net.clone(), *regime, AlgorithmId::Myopic)];
        let c = categorize(b, myo);
        aggregate.push(AggregateRow {
            network: net.clone(),
            spreadability: regime.to_string(),
            algorithm: alg.name().to_string(),
            beta: b.mean,
            se: b.se,
            category: c.category.to_string(),
            flagged: c.flagged || b.negative_slope,
            mean_ms: timing.get(&(net.clone(), regime.to_string(), alg.name().to_string())).copied(),
        });
    }
    write_csv(&cfg.out_file(AGGREGATE_CSV), &aggregate)?;

    // Networks sorted by domain, then size, then name.
    let order_key = |net: &String| {
        let info = networks.get(net);
        (info.map(|i| i.domain.clone()).unwrap_or_default(), info.map_or(0, |i| i.n), net.clone())
    };
    let columns: Vec<AlgorithmId> = algorithms.iter().copied().filter(|&a| a != AlgorithmId::Myopic).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["network".to_string(), "domain".into(), "n".into(), "spreadability".into()];
    header.extend(columns.iter().map(|a| a.name().to_string()));
    w.write_record(&header)?;
    let mut best = Vec::new();
    let mut counts = Vec::new();
    for &regime in &regimes {
        let mut nets: Vec<&String> = pairs.iter().filter(|p| p.1 == regime).map(|p| &p.0).collect();
        nets.sort_by_key(|n| order_key(n));
        let mut tally: BTreeMap<AlgorithmId, usize> = algorithms.iter().map(|&a| (a, 0)).collect();
        for net in nets {
            let info = networks.get(net);
            let mut record = vec![
                net.clone(),
                info.map(|i| i.domain.clone()).unwrap_or_default(),
                info.map_or(String::new(), |i| i.n.to_string()),
                regime.to_string(),
            ];
            let myo = &betas[&(net.clone(), regime, AlgorithmId::Myopic)];
            for alg in &columns {
                record.push(match betas.get(&(net.clone(), regime, *alg)) {
                    Some(b) => categorize(b, myo).category.to_string(),
                    None => String::new(),
                });
            }
            w.write_record(&record)?;
            let all: Vec<AlgorithmId> = algorithms.iter().copied().collect();
            if let Some((alg, _)) = best_of(&betas, net, regime, &all) {
                *tally.get_mut(&alg).expect("algorithm tallied") += 1;
                best.push(BestRow {
                    network: net.clone(),
                    spreadability: regime.to_string(),
                    mean_degree: info.map_or(0.0, |i| i.mean_degree),
                    best_algorithm: alg.name().to_string(),
                });
            }
        }
        counts.extend(tally.into_iter().map(|(alg, count)| BestCountRow {
            spreadability: regime.to_string(),
            algorithm: alg.name().to_string(),
            count,
        }));
    }
    write_atomic(&cfg.out_file(CATEGORY_MATRIX_CSV), &w.into_inner().map_err(|e| e.into_error())?)?;
    write_csv(&cfg.out_file(BEST_CSV), &best)?;
    write_csv(&cfg.out_file(BEST_COUNTS_CSV), &counts)?;
    Ok(ReportOutcome { aggregate, best, counts })
}
