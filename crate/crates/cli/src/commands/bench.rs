use std::collections::{BTreeMap, BTreeSet};
use std::fs::OpenOptions;
use std::io::Write;
use std::sync::Mutex;

use anyhow::Context;
use maximin::cascade::Regime;
use maximin::eval::{benchmark_runtime, evaluate_run, measurement_oracle};
use maximin::seeders::{Algorithm, SeederParams};
use maximin::AlgorithmId;
use rayon::prelude::*;

use super::{load_calibration, protocol_for, Status, NETWORKS_CSV, RESULTS_CSV, TIMING_CSV};
use crate::config::RunConfig;
use crate::manifest::{LoadedNetwork, Manifest};
use crate::tables::{header_of, read_csv_lenient, to_csv_body, to_csv_bytes, write_atomic, NetworkRow, ResultRow, TimingRow};

type CellKey = (String, String, String);

fn result_key(r: &ResultRow) -> CellKey {
    (r.network.clone(), r.spreadability.clone(), r.algorithm.clone())
}

fn timing_key(r: &TimingRow) -> CellKey {
    (r.network.clone(), r.spreadability.clone(), r.algorithm.clone())
}

struct Cell<'a> {
    net: &'a LoadedNetwork,
    regime: Regime,
    alpha: f64,
    algorithm: AlgorithmId,
}

impl Cell<'_> {
    fn key(&self) -> CellKey {
        (self.net.entry.name.clone(), self.regime.to_string(), self.algorithm.name().to_string())
    }

    fn label(&self) -> String {
        format!("{}/{}/{}", self.net.entry.name, self.regime, self.algorithm)
    }
}

pub struct BenchOutcome {
    pub status: Status,
    /// Cells skipped because earlier output already held them.
    pub resumed_cells: usize,
    pub computed_cells: usize,
}

/// Keeps only cells whose rows are exactly runs `0..runs` at the current alpha.
fn complete_result_cells(rows: Vec<ResultRow>, runs: usize, alphas: &BTreeMap<CellKey, f64>) -> BTreeMap<CellKey, Vec<ResultRow>> {
    let mut grouped: BTreeMap<CellKey, Vec<ResultRow>> = BTreeMap::new();
    for r in rows {
        grouped.entry(result_key(&r)).or_default().push(r);
    }
    grouped.retain(|key, rows| {
        rows.sort_by_key(|r| r.run);
        rows.dedup_by_key(|r| r.run);
        let alpha_ok = alphas.get(key).is_some_and(|&a| rows.iter().all(|r| r.alpha == a));
        alpha_ok && rows.len() == runs && rows.iter().enumerate().all(|(i, r)| r.run == i)
    });
    grouped
}

fn canonical_results(mut rows: Vec<ResultRow>) -> Vec<ResultRow> {
    rows.sort_by(|a, b| result_key(a).cmp(&result_key(b)).then(a.run.cmp(&b.run)));
    rows
}

/// Appends rows through one writer; each cell's rows go out in a single write.
struct Appender {
    file: Mutex<std::fs::File>,
}

impl Appender {
    fn open(path: &std::path::Path) -> anyhow::Result<Appender> {
        let file = OpenOptions::new().append(true).open(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(Appender { file: Mutex::new(file) })
    }

    fn append(&self, bytes: &[u8]) -> anyhow::Result<()> {
        let mut f = self.file.lock().expect("appender lock");
        f.write_all(bytes)?;
        f.flush()?;
        Ok(())
    }
}

/// Evaluates every (network, regime, algorithm) cell and times each
/// algorithm. Completed cells found in existing output are kept, so an
/// interrupted run can be resumed.
pub fn cmd_bench(cfg: &RunConfig) -> anyhow::Result<BenchOutcome> {
    let calibration = load_calibration(cfg)?;
    let manifest = Manifest::load(cfg.manifest_path()?)?;
    std::fs::create_dir_all(&cfg.out)?;
    let mut failures = Vec::new();

    let mut networks = Vec::new();
    for entry in &manifest.entries {
        match manifest.load_network(entry, cfg.lcc) {
            Ok(n) => networks.push(n),
            Err(e) => {
                log::error!("skipping network {}: {e:#}", entry.name);
                failures.push(format!("{}: {e:#}", entry.name));
            }
        }
    }
    let network_rows: Vec<NetworkRow> = networks
        .iter()
        .map(|n| NetworkRow {
            network: n.entry.name.clone(),
            domain: n.entry.domain.to_string(),
            n: n.graph.node_count(),
            m: n.graph.edge_count(),
            mean_degree: 2.0 * n.graph.edge_count() as f64 / n.graph.node_count() as f64,
        })
        .collect();
    write_atomic(&cfg.out_file(NETWORKS_CSV), &to_csv_bytes(&network_rows)?)?;

    let mut cells = Vec::new();
    for net in &networks {
        for &regime in &cfg.regimes {
            let Some(&alpha) = calibration.get(&(net.entry.name.clone(), regime)) else {
                let msg = format!("{}: no calibrated alpha for regime {regime}", net.entry.name);
                log::error!("{msg}");
                failures.push(msg);
                continue;
            };
            for &algorithm in &cfg.algorithms {
                cells.push(Cell { net, regime, alpha, algorithm });
            }
        }
    }
    let alphas: BTreeMap<CellKey, f64> = cells.iter().map(|c| (c.key(), c.alpha)).collect();

    // Results: keep complete cells, rewrite canonically, append the rest.
    let results_path = cfg.out_file(RESULTS_CSV);
    let kept = complete_result_cells(read_csv_lenient(&results_path)?, cfg.runs, &alphas);
    let kept_rows: Vec<ResultRow> = kept.values().flatten().cloned().collect();
    let sample = ResultRow {
        network: String::new(),
        domain: String::new(),
        algorithm: String::new(),
        spreadability: String::new(),
        alpha: 0.0,
        run: 0,
        slope: 0.0,
    };
    let mut bytes = header_of(&sample)?;
    bytes.extend(to_csv_body(&canonical_results(kept_rows))?);
    write_atomic(&results_path, &bytes)?;

    let todo: Vec<&Cell> = cells.iter().filter(|c| !kept.contains_key(&c.key())).collect();
    let resumed_cells = cells.len() - todo.len();
    let appender = Appender::open(&results_path)?;
    let outcomes: Vec<Result<(), String>> = todo
        .par_iter()
        .map(|cell| {
            let g = &cell.net.graph;
            let protocol = protocol_for(cfg, &cell.net.entry.name);
            let params = SeederParams::new(cell.alpha).with_rounds(cfg.evaluation_rounds);
            let alg = Algorithm::new(cell.algorithm, params);
            let oracle = measurement_oracle(cell.alpha, cfg.evaluation_rounds, &protocol);
            let mut rows = Vec::with_capacity(cfg.runs);
            for run in 0..cfg.runs {
                let outcome = evaluate_run(g, &alg, &oracle, &protocol, run).map_err(|e| format!("{}: {e}", cell.label()))?;
                rows.push(ResultRow {
                    network: cell.net.entry.name.clone(),
                    domain: cell.net.entry.domain.to_string(),
                    algorithm: cell.algorithm.name().to_string(),
                    spreadability: cell.regime.to_string(),
                    alpha: cell.alpha,
                    run,
                    slope: outcome.slope,
                });
            }
            let body = to_csv_body(&rows).map_err(|e| format!("{}: {e:#}", cell.label()))?;
            appender.append(&body).map_err(|e| format!("{}: {e:#}", cell.label()))
        })
        .collect();
    drop(appender);
    for r in outcomes {
        if let Err(e) = r {
            log::error!("cell failed: {e}");
            failures.push(e);
        }
    }
    let all = canonical_results(read_csv_lenient(&results_path)?);
    let complete = complete_result_cells(all, cfg.runs, &alphas);
    let final_rows = canonical_results(complete.into_values().flatten().collect());
    let mut bytes = header_of(&sample)?;
    bytes.extend(to_csv_body(&final_rows)?);
    write_atomic(&results_path, &bytes)?;

    // Timing cells run one at a time so they do not compete for cores.
    let timing_path = cfg.out_file(TIMING_CSV);
    let mut timing: BTreeMap<CellKey, TimingRow> = read_csv_lenient::<TimingRow>(&timing_path)?
        .into_iter()
        .filter(|r| r.reps == cfg.timing_reps && r.k == cfg.k_max && r.single_core == cfg.single_core_timing)
        .map(|r| (timing_key(&r), r))
        .collect();
    let wanted: BTreeSet<CellKey> = cells.iter().map(Cell::key).collect();
    timing.retain(|k, _| wanted.contains(k));
    for cell in &cells {
        if timing.contains_key(&cell.key()) {
            continue;
        }
        let g = &cell.net.graph;
        let protocol = protocol_for(cfg, &cell.net.entry.name);
        let mut params = SeederParams::new(cell.alpha).with_rounds(cfg.evaluation_rounds);
        params.parallel = !cfg.single_core_timing;
        let alg = Algorithm::new(cell.algorithm, params);
        let init = protocol.round_init(g, 0);
        match benchmark_runtime(g, &alg, init, cfg.k_max, cfg.timing_reps, protocol.seeder_seed(0), cfg.single_core_timing) {
            Ok(rec) => {
                let row = TimingRow {
                    network: cell.net.entry.name.clone(),
                    algorithm: cell.algorithm.name().to_string(),
                    spreadability: cell.regime.to_string(),
                    k: cfg.k_max,
                    reps: cfg.timing_reps,
                    mean_ms: rec.mean_ms,
                    std_ms: rec.std_ms,
                    single_core: rec.single_core,
                };
                timing.insert(cell.key(), row);
                let rows: Vec<&TimingRow> = timing.values().collect();
                write_atomic(&timing_path, &to_csv_bytes(&rows)?)?;
            }
            Err(e) => {
                let msg = format!("timing {}: {e}", cell.label());
                log::error!("{msg}");
                failures.push(msg);
            }
        }
    }
    let rows: Vec<&TimingRow> = timing.values().collect();
    write_atomic(&timing_path, &to_csv_bytes(&rows)?)?;

    Ok(BenchOutcome {
        status: Status::from_failures("items", &failures),
        resumed_cells,
        computed_cells: todo.len(),
    })
}
