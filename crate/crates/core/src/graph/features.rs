use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Domain, Graph};
use crate::centrality::{bfs_distances, UNREACHABLE};

/// The nine structural descriptors fed to the meta-learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFeatures {
    pub domain: Domain,
    pub nodes: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub degree_variance: f64,
    /// Transitivity: closed wedges over all wedges.
    pub clustering: f64,
    /// Mean hop distance over ordered reachable pairs of the largest component.
    pub mean_path_length: f64,
    pub diameter: u32,
    pub assortativity: f64,
    /// Set when clustering or assortativity is undefined and reported as 0.
    pub degenerate: bool,
}

impl NetworkFeatures {
    /// Column names of [`NetworkFeatures::to_vector`].
    pub fn column_names() -> Vec<String> {
        let mut names: Vec<String> = Domain::ALL.iter().map(|d| format!("domain_{d}")).collect();
        names.extend(
            [
                "n",
                "mean_degree",
                "max_degree",
                "degree_variance",
                "clustering",
                "mean_path_length",
                "diameter",
                "assortativity",
            ]
            .map(String::from),
        );
        names
    }

    /// Numeric encoding with the domain one-hot encoded.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; Domain::ALL.len()];
        v[self.domain.index()] = 1.0;
        v.extend([
            self.nodes as f64,
            self.mean_degree,
            self.max_degree as f64,
            self.degree_variance,
            self.clustering,
            self.mean_path_length,
            f64::from(self.diameter),
            self.assortativity,
        ]);
        v
    }
}

pub fn compute_features(g: &Graph, domain: Domain) -> NetworkFeatures {
    let n = g.node_count();
    let degrees = g.degrees();
    let m = g.edge_count();
    let mean_degree = if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 };
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let degree_variance = if n == 0 {
        0.0
    } else {
        degrees.iter().map(|&d| (d as f64 - mean_degree).powi(2)).sum::<f64>() / n as f64
    };

    let (clustering, c_ok) = transitivity(g);
    let (assortativity, r_ok) = degree_assortativity(g, &degrees);
    let (mean_path_length, diameter) = path_statistics(g);

    NetworkFeatures {
        domain,
        nodes: n,
        mean_degree,
        max_degree,
        degree_variance,
        clustering,
        mean_path_length,
        diameter,
        assortativity,
        degenerate: !(c_ok && r_ok),
    }
}

fn transitivity(g: &Graph) -> (f64, bool) {
    let mut closed = 0u64;
    let mut wedges = 0u64;
    for u in 0..g.node_count() {
        let nbrs = g.neighbors(u);
        let d = nbrs.len() as u64;
        wedges += d * d.saturating_sub(1) / 2;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if g.has_edge(a, b) {
                    closed += 1;
                }
            }
        }
    }
    if wedges == 0 {
        (0.0, false)
    } else {
        (closed as f64 / wedges as f64, true)
    }
}

/// Pearson correlation of endpoint degrees, each edge counted in both directions.
fn degree_assortativity(g: &Graph, degrees: &[usize]) -> (f64, bool) {
    let mut count = 0.0;
    let (mut sx, mut sxx, mut sxy) = (0.0, 0.0, 0.0);
    for (u, v) in g.edges() {
        let (a, b) = (degrees[u] as f64, degrees[v] as f64);
        count += 2.0;
        sx += a + b;
        sxx += a * a + b * b;
        sxy += 2.0 * a * b;
    }
    if count == 0.0 {
        return (0.0, false);
    }
    let mean = sx / count;
    let var = sxx / count - mean * mean;
    let cov = sxy / count - mean * mean;
    if var <= 1e-12 * mean.max(1.0).powi(2) {
        return (0.0, false);
    }
    ((cov / var).clamp(-1.0, 1.0), true)
}

fn path_statistics(g: &Graph) -> (f64, u32) {
    let lcc = g.largest_component();
    let n = lcc.node_count();
    if n < 2 {
        return (0.0, 0);
    }
    let per_source: Vec<(u64, u32)> = (0..n)
        .into_par_iter()
        .map(|s| {
            let dist = bfs_distances(&lcc, s);
            let mut total = 0u64;
            let mut far = 0u32;
            for &d in &dist {
                if d != UNREACHABLE {
                    total += u64::from(d);
                    far = far.max(d);
                }
            }
            (total, far)
        })
        .collect();
    let total: u64 = per_source.iter().map(|p| p.0).sum();
    let diameter = per_source.iter().map(|p| p.1).max().unwrap_or(0);
    let pairs = (n as u64) * (n as u64 - 1);
    (total as f64 / pairs as f64, diameter)
}
