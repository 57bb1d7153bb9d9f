//! Unweighted shortest-path kernels, closeness/harmonic centrality and
//! personalized PageRank.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Hop distance of a node not reachable from the source(s).
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentralityError {
    #[error("source set is empty")]
    NoSources,
    #[error("node {0} out of range")]
    OutOfRange(NodeId),
}

/// Hop distances from `source`; unreachable nodes hold [`UNREACHABLE`].
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Distances from a source together with the nodes of each hop layer.
#[derive(Debug, Clone, PartialEq)]
pub struct BfsLayers {
    pub dist: Vec<u32>,
    /// `layers[t]` holds the nodes at distance `t`, sorted ascending.
    pub layers: Vec<Vec<NodeId>>,
}

pub fn bfs_layers(g: &Graph, source: NodeId) -> BfsLayers {
    let dist = bfs_distances(g, source);
    let depth = dist.iter().filter(|&&d| d != UNREACHABLE).max().copied().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth as usize + 1];
    for (v, &d) in dist.iter().enumerate() {
        if d != UNREACHABLE {
            layers[d as usize].push(v);
        }
    }
    BfsLayers { dist, layers }
}

/// Distance from each node to its nearest source.
pub fn multi_source_distance(g: &Graph, sources: &[NodeId]) -> Result<Vec<u32>, CentralityError> {
    if sources.is_empty() {
        return Err(CentralityError::NoSources);
    }
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if s >= g.node_count() {
            return Err(CentralityError::OutOfRange(s));
        }
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// All-pairs hop distances, computed as one BFS per source.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    rows: Vec<Vec<u32>>,
}

impl DistanceMatrix {
    pub fn all_pairs(g: &Graph) -> Self {
        let rows = (0..g.node_count()).into_par_iter().map(|s| bfs_distances(g, s)).collect();
        DistanceMatrix { rows }
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> u32 {
        self.rows[u][v]
    }

    pub fn row(&self, u: NodeId) -> &[u32] {
        &self.rows[u]
    }
}

fn closeness_from(dist: &[u32]) -> f64 {
    let (reach, total) = dist
        .iter()
        .filter(|&&d| d != UNREACHABLE && d > 0)
        .fold((0u64, 0u64), |(r, t), &d| (r + 1, t + u64::from(d)));
    if total == 0 {
        0.0
    } else {
        reach as f64 / total as f64
    }
}

fn harmonic_from(dist: &[u32]) -> f64 {
    dist.iter().filter(|&&d| d != UNREACHABLE && d > 0).map(|&d| 1.0 / f64::from(d)).sum()
}

/// Closeness of `v` within its own component: reachable count over summed
/// distance. A node with no neighbors scores 0.
pub fn closeness_of(g: &Graph, v: NodeId) -> f64 {
    closeness_from(&bfs_distances(g, v))
}

pub fn harmonic_of(g: &Graph, v: NodeId) -> f64 {
    harmonic_from(&bfs_distances(g, v))
}

pub fn closeness(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).into_par_iter().map(|v| closeness_of(g, v)).collect()
}

pub fn harmonic(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).into_par_iter().map(|v| harmonic_of(g, v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PprParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PprParams {
    fn default() -> Self {
        PprParams { damping: 0.85, tol: 1e-6, max_iters: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PprScores {
    pub scores: Vec<f64>,
    pub damping: f64,
    pub personalization: Vec<NodeId>,
    pub iterations: usize,
    /// False when `max_iters` ran out before the L1 change dropped below `tol`.
    pub converged: bool,
}

/// Personalized PageRank by power iteration. Restarts and dangling mass both
/// go uniformly to the personalization set.
pub fn ppr(g: &Graph, personalization: &[NodeId], params: PprParams) -> Result<PprScores, CentralityError> {
    let n = g.node_count();
    if personalization.is_empty() {
        return Err(CentralityError::NoSources);
    }
    let mut restart = vec![0.0; n];
    let mut members: Vec<NodeId> = personalization.to_vec();
    members.sort_unstable();
    members.dedup();
    for &s in &members {
        if s >= n {
            return Err(CentralityError::OutOfRange(s));
        }
    }
    let weight = 1.0 / members.len() as f64;
    for &s in &members {
        restart[s] = weight;
    }

    let d = params.damping;
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iters {
        iterations += 1;
        let mut dangling = 0.0;
        next.iter_mut().for_each(|v| *v = 0.0);
        for u in 0..n {
            let deg = g.degree(u);
            if deg == 0 {
                dangling += x[u];
                continue;
            }
            let share = d * x[u] / deg as f64;
            for &v in g.neighbors(u) {
                next[v] += share;
            }
        }
        let redistributed = d * dangling + (1.0 - d);
        for (v, r) in next.iter_mut().zip(&restart) {
            *v += redistributed * r;
        }
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("personalized PageRank did not converge in {} iterations", params.max_iters);
    }
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    Ok(PprScores { scores: x, damping: d, personalization: members, iterations, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    #[test]
    fn layers_on_small_graphs() {
        assert_eq!(bfs_layers(&generate::path(3), 0).layers, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(bfs_layers(&generate::complete(3), 0).layers, vec![vec![0], vec![1, 2]]);
        assert_eq!(bfs_layers(&generate::star(3), 1).layers, vec![vec![1], vec![0], vec![2, 3]]);
    }

    #[test]
    fn multi_source() {
        let p5 = generate::path(5);
        assert_eq!(multi_source_distance(&p5, &[0]).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(multi_source_distance(&p5, &[0, 4]).unwrap(), vec![0, 1, 2, 1, 0]);
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let d = multi_source_distance(&split, &[0]).unwrap();
        assert_eq!(&d[2..], &[UNREACHABLE, UNREACHABLE]);
        assert_eq!(multi_source_distance(&p5, &[]), Err(CentralityError::NoSources));
    }

    #[test]
    fn closeness_values() {
        let c = closeness(&generate::path(3));
        assert_eq!(c[1], 1.0);
        assert!((c[0] - 2.0 / 3.0).abs() < 1e-15 && (c[2] - 2.0 / 3.0).abs() < 1e-15);
        assert!(closeness(&generate::complete(3)).iter().all(|&v| v == 1.0));
        let s = closeness(&generate::star(3));
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn harmonic_values() {
        let h = harmonic(&generate::path(3));
        assert_eq!((h[0], h[1]), (1.5, 2.0));
        assert_eq!(harmonic(&generate::star(3))[1], 2.0);
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(harmonic(&g)[2], 0.0);
        assert_eq!(closeness(&g)[2], 0.0);
    }

    #[test]
    fn ppr_basic_properties() {
        let k3 = ppr(&generate::complete(3), &[0], PprParams::default()).unwrap();
        assert!((k3.scores[1] - k3.scores[2]).abs() < 1e-15);
        assert!((k3.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        let tight = PprParams { tol: 1e-12, max_iters: 10_000, ..Default::default() };
        let p3 = ppr(&generate::path(3), &[0], tight).unwrap();
        assert!(p3.converged);
        assert!(p3.scores[0] > p3.scores[2]);

        let p5 = ppr(&generate::path(5), &[0], tight).unwrap();
        assert!(p5.scores.windows(2).skip(1).all(|w| w[0] > w[1]), "{:?}", p5.scores);
    }

    #[test]
    fn ppr_flags_non_convergence() {
        let params = PprParams { tol: 0.0, max_iters: 3, ..Default::default() };
        let out = ppr(&generate::path(6), &[0], params).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
        assert!((out.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ppr_handles_isolated_nodes() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let out = ppr(&g, &[0], PprParams::default()).unwrap();
        assert!((out.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(out.scores.iter().all(|&s| s >= 0.0));
    }
}
