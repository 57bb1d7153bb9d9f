use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{argmin_non_seed, ascending_non_seeds, IncrementalSeeder, SeedError, SeedSet};
use crate::cascade::{mix_seed, AccessOracle};
use crate::centrality::bfs_distances;
use crate::graph::{Graph, NodeId};

const RANDOM_STREAM: u64 = 0x5EED_0001;

/// Uniform sampling without replacement from the non-initial nodes.
pub struct RandomSeeder {
    pool: Vec<NodeId>,
    rng: ChaCha8Rng,
    found: Vec<NodeId>,
}

impl RandomSeeder {
    pub fn new(g: &Graph, init: NodeId, rng_seed: u64) -> Self {
        let pool = (0..g.node_count()).filter(|&v| v != init).collect();
        RandomSeeder { pool, rng: ChaCha8Rng::seed_from_u64(mix_seed(rng_seed, RANDOM_STREAM)), found: Vec::new() }
    }
}

impl IncrementalSeeder for RandomSeeder {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        if self.pool.is_empty() {
            return Err(SeedError::Exhausted { found: self.found.clone() });
        }
        let idx = self.rng.gen_range(0..self.pool.len());
        let v = self.pool.swap_remove(idx);
        self.found.push(v);
        Ok(v)
    }
}

/// Farthest-point seeding in the hop metric. Unreachable nodes count as
/// farther than any reachable one.
pub struct Gonzalez<'g> {
    g: &'g Graph,
    seeds: SeedSet,
    dist: Vec<u32>,
    queue: VecDeque<NodeId>,
}

impl<'g> Gonzalez<'g> {
    pub fn new(g: &'g Graph, init: NodeId) -> Self {
        Gonzalez { g, seeds: SeedSet::new(g.node_count(), init), dist: bfs_distances(g, init), queue: VecDeque::new() }
    }

    /// Lowers `dist` with distances from `s`, exploring only improved nodes.
    fn relax_from(&mut self, s: NodeId) {
        self.dist[s] = 0;
        self.queue.clear();
        self.queue.push_back(s);
        while let Some(u) = self.queue.pop_front() {
            let next = self.dist[u] + 1;
            for &v in self.g.neighbors(u) {
                if next < self.dist[v] {
                    self.dist[v] = next;
                    self.queue.push_back(v);
                }
            }
        }
    }
}

impl IncrementalSeeder for Gonzalez<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let mut best: Option<NodeId> = None;
        for v in 0..self.g.node_count() {
            if self.seeds.contains(v) {
                continue;
            }
            match best {
                Some(b) if self.dist[b] >= self.dist[v] => {}
                _ => best = Some(v),
            }
        }
        let v = best.ok_or_else(|| SeedError::Exhausted { found: self.seeds.chosen() })?;
        self.seeds.push(v);
        self.relax_from(v);
        Ok(v)
    }
}

/// Re-estimates access probabilities after every seed and picks the
/// worst-off non-seed.
pub struct Myopic<'g> {
    g: &'g Graph,
    seeds: SeedSet,
    oracle: AccessOracle,
}

impl<'g> Myopic<'g> {
    pub fn new(g: &'g Graph, init: NodeId, oracle: AccessOracle) -> Self {
        Myopic { g, seeds: SeedSet::new(g.node_count(), init), oracle }
    }
}

impl IncrementalSeeder for Myopic<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let step = self.seeds.order.len() as u64;
        let est = self.oracle.estimate(self.g, &self.seeds.order, step)?;
        let v = argmin_non_seed(&est.pi, &self.seeds).ok_or_else(|| SeedError::Exhausted { found: self.seeds.chosen() })?;
        self.seeds.push(v);
        Ok(v)
    }
}

/// One estimate from the initial seed; seeds are the lowest-probability
/// nodes in ascending order.
pub struct NaiveMyopic {
    order: std::vec::IntoIter<NodeId>,
    found: Vec<NodeId>,
}

impl NaiveMyopic {
    pub fn new(g: &Graph, init: NodeId, oracle: AccessOracle) -> Result<Self, SeedError> {
        let seeds = SeedSet::new(g.node_count(), init);
        let est = oracle.estimate(g, &[init], 1)?;
        Ok(NaiveMyopic { order: ascending_non_seeds(&est.pi, &seeds).into_iter(), found: Vec::new() })
    }

    pub(crate) fn from_scores(scores: &[f64], init: NodeId) -> Self {
        let seeds = SeedSet::new(scores.len(), init);
        NaiveMyopic { order: ascending_non_seeds(scores, &seeds).into_iter(), found: Vec::new() }
    }
}

impl IncrementalSeeder for NaiveMyopic {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let v = self.order.next().ok_or_else(|| SeedError::Exhausted { found: self.found.clone() })?;
        self.found.push(v);
        Ok(v)
    }
}
