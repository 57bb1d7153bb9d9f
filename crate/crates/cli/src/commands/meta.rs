use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use maximin::cascade::Regime;
use maximin::graph::{compute_features, load_edge_list};
use maximin::meta::forest::ForestParams;
use maximin::meta::{
    build_meta_report, meta_predict, select_ensemble, train_meta, BetaTable, EnsembleSet, LabeledNetwork, MetaModel,
    MetaReport, MetaSelection, TimingTable,
};
use maximin::{AlgorithmId, Domain};

use super::report::{beta_results, best_of, BetaResults};
use super::{require_artifact, TIMING_CSV};
use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::tables::{read_csv, write_atomic, write_csv, MetaReportCsvRow, TimingRow};

pub fn ensemble_path(cfg: &RunConfig, regime: Regime) -> PathBuf {
    cfg.out_file(&format!("ensemble_{regime}.json"))
}

pub fn model_path(cfg: &RunConfig, regime: Regime) -> PathBuf {
    cfg.out_file(&format!("model_{regime}.json"))
}

pub fn meta_report_path(cfg: &RunConfig, regime: Regime) -> PathBuf {
    cfg.out_file(&format!("meta_report_{regime}.csv"))
}

fn beta_table(betas: &BetaResults, regime: Regime) -> (BetaTable, BTreeMap<String, f64>) {
    let mut table: BetaTable = BTreeMap::new();
    let mut myopic = BTreeMap::new();
    for ((net, r, alg), b) in betas {
        if *r != regime {
            continue;
        }
        table.entry(net.clone()).or_default().insert(*alg, b.mean);
        if *alg == AlgorithmId::Myopic {
            myopic.insert(net.clone(), b.mean);
        }
    }
    (table, myopic)
}

/// Greedy ensemble from bench results, or the published preset.
pub fn cmd_meta_select(cfg: &RunConfig, preset: bool, size: usize) -> anyhow::Result<Vec<EnsembleSet>> {
    let betas = if preset { BTreeMap::new() } else { beta_results(cfg)? };
    let mut out = Vec::new();
    for &regime in &cfg.regimes {
        let ens = if preset {
            EnsembleSet::preset(regime)
        } else {
            let (table, myopic) = beta_table(&betas, regime);
            if table.is_empty() {
                bail!("no bench results for regime {regime}");
            }
            let mut ens = select_ensemble(&table, &myopic, size)?;
            ens.regime = Some(regime);
            if !ens.degenerate_networks.is_empty() {
                log::warn!("{regime}: myopic slope is not positive on {}", ens.degenerate_networks.join(", "));
            }
            ens
        };
        std::fs::create_dir_all(&cfg.out)?;
        write_atomic(&ensemble_path(cfg, regime), &serde_json::to_vec_pretty(&ens)?)?;
        out.push(ens);
    }
    Ok(out)
}

fn load_ensemble(cfg: &RunConfig, regime: Regime, preset: bool) -> anyhow::Result<EnsembleSet> {
    if preset {
        return Ok(EnsembleSet::preset(regime));
    }
    let path = ensemble_path(cfg, regime);
    require_artifact(&path, "meta select")?;
    let ens: EnsembleSet = serde_json::from_slice(&std::fs::read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
    ens.validate()?;
    Ok(ens)
}

/// Trains one model per regime on best-in-ensemble labels from bench results.
pub fn cmd_meta_train(cfg: &RunConfig, preset: bool) -> anyhow::Result<Vec<MetaModel>> {
    let betas = beta_results(cfg)?;
    let manifest = Manifest::load(cfg.manifest_path()?)?;
    let mut features = BTreeMap::new();
    for entry in &manifest.entries {
        let net = manifest.load_network(entry, cfg.lcc)?;
        features.insert(entry.name.clone(), compute_features(&net.graph, entry.domain));
    }
    let mut models = Vec::new();
    for &regime in &cfg.regimes {
        let ens = load_ensemble(cfg, regime, preset)?;
        let mut samples = Vec::new();
        for (name, f) in &features {
            let Some((label, _)) = best_of(&betas, name, regime, &ens.members) else {
                log::warn!("{name}: no bench results for the {regime} ensemble, left out of training");
                continue;
            };
            samples.push(LabeledNetwork { name: name.clone(), features: f.clone(), label });
        }
        let params = ForestParams { seed: cfg.seed, ..ForestParams::default() };
        let model = train_meta(&samples, &ens, cfg.seed, &params)?;
        model.save(&model_path(cfg, regime))?;
        models.push(model);
    }
    Ok(models)
}

pub fn cmd_meta_predict(model: &Path, network: &Path, domain: Domain, lcc: bool) -> anyhow::Result<AlgorithmId> {
    let model = MetaModel::load(model).with_context(|| format!("loading model {}", model.display()))?;
    let g = load_edge_list(network, lcc).with_context(|| format!("loading {}", network.display()))?;
    Ok(meta_predict(&model, &g, domain)?)
}

fn timing_table(cfg: &RunConfig, regime: Regime) -> anyhow::Result<TimingTable> {
    let path = cfg.out_file(TIMING_CSV);
    require_artifact(&path, "bench")?;
    let mut table: TimingTable = BTreeMap::new();
    for r in read_csv::<TimingRow>(&path)? {
        if r.spreadability != regime.to_string() {
            continue;
        }
        let alg: AlgorithmId = r.algorithm.parse()?;
        table.entry(r.network).or_default().insert(alg, r.mean_ms);
    }
    Ok(table)
}

/// Compares meta-learner (or, with `oracle`, best-in-ensemble) selections
/// against Myopic and writes one report per regime.
pub fn cmd_meta_report(cfg: &RunConfig, oracle: bool, preset: bool) -> anyhow::Result<Vec<MetaReport>> {
    let betas = beta_results(cfg)?;
    let manifest = Manifest::load(cfg.manifest_path()?)?;
    let mut reports = Vec::new();
    for &regime in &cfg.regimes {
        let (table, _) = beta_table(&betas, regime);
        let mut selections = Vec::new();
        if oracle {
            let ens = load_ensemble(cfg, regime, preset)?;
            for net in table.keys() {
                if let Some((alg, _)) = best_of(&betas, net, regime, &ens.members) {
                    selections.push(MetaSelection { network: net.clone(), selected: alg, inference_ms: 0.0 });
                }
            }
        } else {
            let path = model_path(cfg, regime);
            require_artifact(&path, "meta train")?;
            let model = MetaModel::load(&path)?;
            for entry in manifest.entries.iter().filter(|e| table.contains_key(&e.name)) {
                let net = manifest.load_network(entry, cfg.lcc)?;
                let start = Instant::now();
                let selected = meta_predict(&model, &net.graph, entry.domain)?;
                let inference_ms = start.elapsed().as_secs_f64() * 1e3;
                selections.push(MetaSelection { network: entry.name.clone(), selected, inference_ms });
            }
        }
        let report = build_meta_report(&selections, &table, &timing_table(cfg, regime)?)?;
        let rows: Vec<MetaReportCsvRow> = report
            .rows
            .iter()
            .map(|r| MetaReportCsvRow {
                network: r.network.clone(),
                selected_alg: r.selected_alg.name().to_string(),
                beta_selected: r.beta_selected,
                beta_myopic: r.beta_myopic,
                perf_diff_pct: r.perf_diff_pct,
                t_selected_ms: r.t_selected_ms,
                t_myopic_ms: r.t_myopic_ms,
                speedup: r.speedup,
            })
            .collect();
        write_csv(&meta_report_path(cfg, regime), &rows)?;
        reports.push(report);
    }
    Ok(reports)
}
