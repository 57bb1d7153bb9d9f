//! Deterministic graph families for fixtures, benchmarks and synthetic corpora.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};

fn build(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator emits in-range ids")
}

/// Path 0 - 1 - ... - (n-1).
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    build(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Star with center 0 and leaves 1..=leaves.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Two cliques of sizes `a` and `b` joined by a single bridge between node
/// `a - 1` and node `a`.
pub fn two_cliques(a: usize, b: usize) -> Graph {
    let left = (0..a).flat_map(|u| (u + 1..a).map(move |v| (u, v)));
    let right = (a..a + b).flat_map(move |u| (u + 1..a + b).map(move |v| (u, v)));
    build(a + b, left.chain(right).chain([(a - 1, a)]))
}

/// Uniform random graph with exactly `m` distinct edges.
pub fn gnm(n: usize, m: usize, seed: u64) -> Graph {
    let max_edges = n * n.saturating_sub(1) / 2;
    assert!(m <= max_edges, "{m} edges do not fit on {n} nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    build(n, edges)
}

/// Ring lattice with `k` neighbors per node (k even), each edge rewired with
/// probability `p`.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Graph {
    assert!(k.is_multiple_of(2) && k < n, "k must be even and below n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let lattice: Vec<_> = edges.iter().copied().collect();
    for (u, v) in lattice {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let w = rng.gen_range(0..n);
        let candidate = (u.min(w), u.max(w));
        if w != u && !edges.contains(&candidate) {
            edges.remove(&(u, v));
            edges.insert(candidate);
        }
    }
    build(n, edges)
}

/// Preferential attachment: each new node links to `m` distinct existing
/// nodes chosen proportionally to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m >= 1 && m < n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut endpoints: Vec<NodeId> = Vec::new();
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for u in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(*endpoints.choose(&mut rng).unwrap());
        }
        for &v in &targets {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    build(n, edges)
}
