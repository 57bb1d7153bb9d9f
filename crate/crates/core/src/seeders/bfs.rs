use super::prior::NaiveMyopic;
use super::{argmin_non_seed, IncrementalSeeder, SeedError, SeedSet};
use crate::centrality::{bfs_layers, UNREACHABLE};
use crate::graph::{Graph, NodeId};

/// Layered access estimate from a single source.
///
/// The source gets 1. For a node `i` in layer `t`, a parent-only value is
/// `a_i = 1 - prod_{p in N(i), layer t-1} (1 - alpha * q_p)`, then same-layer
/// neighbors are folded in with `q_i = 1 - (1 - a_i) * prod_{u in N(i), layer t} (1 - alpha * a_u)`.
/// Unreachable nodes get 0.
pub fn bfs_access_estimate(g: &Graph, source: NodeId, alpha: f64) -> Vec<f64> {
    let bfs = bfs_layers(g, source);
    let mut q = vec![0.0; g.node_count()];
    let mut parent_only = vec![0.0; g.node_count()];
    q[source] = 1.0;
    for (t, layer) in bfs.layers.iter().enumerate().skip(1) {
        let t = t as u32;
        for &i in layer {
            let miss: f64 = g
                .neighbors(i)
                .iter()
                .filter(|&&p| bfs.dist[p] == t - 1)
                .map(|&p| 1.0 - alpha * q[p])
                .product();
            parent_only[i] = 1.0 - miss;
        }
        for &i in layer {
            let miss: f64 = g
                .neighbors(i)
                .iter()
                .filter(|&&u| bfs.dist[u] == t)
                .map(|&u| 1.0 - alpha * parent_only[u])
                .product();
            q[i] = 1.0 - (1.0 - parent_only[i]) * miss;
        }
    }
    debug_assert!(bfs.dist.iter().zip(&q).all(|(&d, &p)| d != UNREACHABLE || p == 0.0));
    q
}

/// Merges the estimate from `source` into `pi` as an independent channel:
/// `pi_i <- 1 - (1 - pi_i) * (1 - q_i)`.
pub fn bfs_access_update(g: &Graph, source: NodeId, alpha: f64, pi: &mut [f64]) {
    let q = bfs_access_estimate(g, source, alpha);
    for (p, qi) in pi.iter_mut().zip(q) {
        *p = 1.0 - (1.0 - *p) * (1.0 - qi);
    }
}

/// Myopic selection driven by the BFS estimate, updated from each new seed.
pub struct MyopicBfs<'g> {
    g: &'g Graph,
    alpha: f64,
    seeds: SeedSet,
    pi: Vec<f64>,
}

impl<'g> MyopicBfs<'g> {
    pub fn new(g: &'g Graph, init: NodeId, alpha: f64) -> Self {
        let mut pi = vec![0.0; g.node_count()];
        bfs_access_update(g, init, alpha, &mut pi);
        MyopicBfs { g, alpha, seeds: SeedSet::new(g.node_count(), init), pi }
    }
}

impl IncrementalSeeder for MyopicBfs<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let v = argmin_non_seed(&self.pi, &self.seeds).ok_or_else(|| SeedError::Exhausted { found: self.seeds.chosen() })?;
        self.seeds.push(v);
        bfs_access_update(self.g, v, self.alpha, &mut self.pi);
        Ok(v)
    }
}

/// One BFS estimate from the initial seed, consumed in ascending order.
pub struct NaiveMyopicBfs(NaiveMyopic);

impl NaiveMyopicBfs {
    pub fn new(g: &Graph, init: NodeId, alpha: f64) -> Self {
        NaiveMyopicBfs(NaiveMyopic::from_scores(&bfs_access_estimate(g, init, alpha), init))
    }
}

impl IncrementalSeeder for NaiveMyopicBfs {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        self.0.next_seed()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{select_seeds, AlgorithmId, SeederParams};
    use super::*;
    use crate::cascade::exact_access;
    use crate::graph::generate;

    #[test]
    fn estimate_is_exact_on_path() {
        let g = generate::path(3);
        assert_eq!(bfs_access_estimate(&g, 0, 0.5), vec![1.0, 0.5, 0.25]);
        assert_eq!(bfs_access_estimate(&g, 0, 0.5), exact_access(&g, &[0], 0.5).unwrap().pi);
    }

    #[test]
    fn estimate_on_triangle() {
        let q = bfs_access_estimate(&generate::complete(3), 0, 0.5);
        assert_eq!(q, vec![1.0, 0.625, 0.625]);
    }

    #[test]
    fn trees_match_exact_oracle() {
        let g = Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)]).unwrap();
        for alpha in [0.2, 0.7] {
            let exact = exact_access(&g, &[2], alpha).unwrap().pi;
            let approx = bfs_access_estimate(&g, 2, alpha);
            for (a, b) in exact.iter().zip(&approx) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn update_merges_and_skips_unreachable() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let mut pi = vec![0.0, 0.0, 0.5, 0.0];
        bfs_access_update(&g, 0, 0.5, &mut pi);
        assert_eq!(pi, vec![1.0, 0.5, 0.5, 0.0]);
        bfs_access_update(&g, 0, 0.5, &mut pi);
        assert_eq!(pi, vec![1.0, 0.75, 0.5, 0.0]);
    }

    #[test]
    fn seeder_traces() {
        let p = SeederParams::new(0.5);
        let p5 = generate::path(5);
        assert_eq!(select_seeds(AlgorithmId::MyopicBfs, &p5, 2, 1, &p).unwrap().chosen, vec![0]);
        assert_eq!(select_seeds(AlgorithmId::NaiveMyopicBfs, &p5, 2, 2, &p).unwrap().chosen, vec![0, 4]);
        let star = generate::star(3);
        assert_eq!(select_seeds(AlgorithmId::MyopicBfs, &star, 0, 1, &p).unwrap().chosen, vec![1]);
        let zero = SeederParams::new(0.0);
        for id in [AlgorithmId::MyopicBfs, AlgorithmId::NaiveMyopicBfs] {
            assert_eq!(select_seeds(id, &p5, 2, 4, &zero).unwrap().chosen, vec![0, 1, 3, 4]);
        }
    }
}
