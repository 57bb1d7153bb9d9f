use maximin::cascade::{alpha_grid, pick_alpha, spreadability_curve, SpreadabilityCurve};
use rayon::prelude::*;

use super::{Status, CALIBRATION_CSV};
use crate::cache::Cache;
use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::tables::{write_csv, CalibrationRow};

pub struct CalibrateOutcome {
    pub rows: Vec<CalibrationRow>,
    pub status: Status,
    pub cache_hits: usize,
    pub simulated: usize,
}

/// Calibrates alpha for every manifest network and regime, writing
/// `calibration.csv`. Spreadability curves are cached by file content.
pub fn cmd_calibrate(cfg: &RunConfig) -> anyhow::Result<CalibrateOutcome> {
    let manifest = Manifest::load(cfg.manifest_path()?)?;
    let cache = Cache::new(cfg.out.join("cache"));
    let grid = alpha_grid();
    let results: Vec<Result<Vec<CalibrationRow>, String>> = manifest
        .entries
        .par_iter()
        .map(|entry| {
            let net = manifest.load_network(entry, cfg.lcc).map_err(|e| format!("{}: {e:#}", entry.name))?;
            let key = Cache::key(
                &net.content,
                &[
                    ("kind", "spreadability-curve".into()),
                    ("rounds", cfg.calibration_rounds.to_string()),
                    ("seed", cfg.seed.to_string()),
                    ("lcc", cfg.lcc.to_string()),
                    ("grid", format!("{:?}", grid)),
                ],
            );
            let curve = match cache.get::<SpreadabilityCurve>("calibration", &key) {
                Some(c) => c,
                None => {
                    let c = spreadability_curve(&net.graph, &grid, cfg.calibration_rounds, cfg.seed, true)
                        .map_err(|e| format!("{}: {e}", entry.name))?;
                    if let Err(e) = cache.put("calibration", &key, &c) {
                        log::warn!("could not cache calibration for {}: {e:#}", entry.name);
                    }
                    c
                }
            };
            Ok(cfg
                .regimes
                .iter()
                .map(|&r| {
                    let cal = pick_alpha(curve.clone(), r.target());
                    if cal.unreachable {
                        log::warn!("{}: {} target {} unreachable, using alpha {}", entry.name, r, r.target(), cal.alpha);
                    }
                    CalibrationRow {
                        network: entry.name.clone(),
                        regime: r.to_string(),
                        alpha: cal.alpha,
                        achieved_fraction: cal.achieved,
                    }
                })
                .collect())
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(mut v) => rows.append(&mut v),
            Err(e) => {
                log::error!("skipping network {e}");
                failures.push(e);
            }
        }
    }
    write_csv(&cfg.out_file(CALIBRATION_CSV), &rows)?;
    Ok(CalibrateOutcome {
        rows,
        status: Status::from_failures("networks", &failures),
        cache_hits: cache.hits(),
        simulated: cache.misses(),
    })
}
