use maximin::graph::compute_features;
use serde::{Deserialize, Serialize};

use super::Status;
use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::tables::write_csv;

pub const FEATURES_CSV: &str = "features.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub network: String,
    pub domain: String,
    pub nodes: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub degree_variance: f64,
    pub clustering: f64,
    pub mean_path_length: f64,
    pub diameter: u32,
    pub assortativity: f64,
    pub degenerate: bool,
}

/// Structural profile of every manifest network.
pub fn cmd_features(cfg: &RunConfig) -> anyhow::Result<(Vec<FeatureRow>, Status)> {
    let manifest = Manifest::load(cfg.manifest_path()?)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for entry in &manifest.entries {
        match manifest.load_network(entry, cfg.lcc) {
            Ok(net) => {
                let f = compute_features(&net.graph, entry.domain);
                rows.push(FeatureRow {
                    network: entry.name.clone(),
                    domain: f.domain.to_string(),
                    nodes: f.nodes,
                    mean_degree: f.mean_degree,
                    max_degree: f.max_degree,
                    degree_variance: f.degree_variance,
                    clustering: f.clustering,
                    mean_path_length: f.mean_path_length,
                    diameter: f.diameter,
                    assortativity: f.assortativity,
                    degenerate: f.degenerate,
                });
            }
            Err(e) => {
                log::error!("skipping network {}: {e:#}", entry.name);
                failures.push(format!("{}: {e:#}", entry.name));
            }
        }
    }
    write_csv(&cfg.out_file(FEATURES_CSV), &rows)?;
    Ok((rows, Status::from_failures("networks", &failures)))
}
