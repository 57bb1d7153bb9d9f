use std::collections::HashMap;

use super::{argmin_non_seed, highest_degree_neighbor, IncrementalSeeder, SeedError, SeedSet};
use crate::centrality::{closeness, harmonic_of};
use crate::graph::{Graph, NodeId};

/// Picks the non-seed with the lowest closeness centrality.
pub struct LeastCentral {
    closeness: Vec<f64>,
    seeds: SeedSet,
}

impl LeastCentral {
    pub fn new(g: &Graph, init: NodeId) -> Self {
        LeastCentral { closeness: closeness(g), seeds: SeedSet::new(g.node_count(), init) }
    }
}

impl IncrementalSeeder for LeastCentral {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let v = argmin_non_seed(&self.closeness, &self.seeds)
            .ok_or_else(|| SeedError::Exhausted { found: self.seeds.chosen() })?;
        self.seeds.push(v);
        Ok(v)
    }
}

/// Resolves a candidate `x` to its highest-degree neighbor. Candidates whose
/// best neighbor is already a seed (or who have no neighbors) are marked
/// consumed and never offered again, which guarantees progress.
fn neighbor_of_candidate(g: &Graph, x: NodeId, seeds: &SeedSet, consumed: &mut [bool]) -> Option<NodeId> {
    match highest_degree_neighbor(g, x) {
        Some(y) if !seeds.contains(y) => Some(y),
        _ => {
            consumed[x] = true;
            None
        }
    }
}

/// Lowest-closeness non-seed, then its highest-degree neighbor.
pub struct LeastCentralNeighbor<'g> {
    g: &'g Graph,
    /// All nodes sorted by ascending closeness, ties by id.
    order: Vec<NodeId>,
    consumed: Vec<bool>,
    seeds: SeedSet,
}

impl<'g> LeastCentralNeighbor<'g> {
    pub fn new(g: &'g Graph, init: NodeId) -> Self {
        let c = closeness(g);
        let mut order: Vec<NodeId> = (0..g.node_count()).collect();
        order.sort_by(|&a, &b| c[a].total_cmp(&c[b]).then(a.cmp(&b)));
        LeastCentralNeighbor { g, order, consumed: vec![false; g.node_count()], seeds: SeedSet::new(g.node_count(), init) }
    }
}

impl IncrementalSeeder for LeastCentralNeighbor<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        for i in 0..self.order.len() {
            let x = self.order[i];
            if self.seeds.contains(x) || self.consumed[x] {
                continue;
            }
            if let Some(y) = neighbor_of_candidate(self.g, x, &self.seeds, &mut self.consumed) {
                self.seeds.push(y);
                return Ok(y);
            }
        }
        Err(SeedError::Exhausted { found: self.seeds.chosen() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDegreeVariant {
    /// Minimum-degree pool, lowest harmonic centrality.
    Hc,
    /// As `Hc`, then that node's highest-degree neighbor.
    Hcn,
    /// Minimum-degree pool, highest sum of neighbor degrees.
    Nd,
    /// As `Nd`, then that node's highest-degree neighbor.
    Ndn,
}

impl MinDegreeVariant {
    fn takes_neighbor(self) -> bool {
        matches!(self, MinDegreeVariant::Hcn | MinDegreeVariant::Ndn)
    }
}

/// The four minimum-degree heuristics. Harmonic centrality is computed lazily,
/// only for nodes that reach a minimum-degree pool.
pub struct MinDegree<'g> {
    g: &'g Graph,
    variant: MinDegreeVariant,
    seeds: SeedSet,
    consumed: Vec<bool>,
    harmonic: HashMap<NodeId, f64>,
}

impl<'g> MinDegree<'g> {
    pub fn new(g: &'g Graph, init: NodeId, variant: MinDegreeVariant) -> Self {
        MinDegree {
            g,
            variant,
            seeds: SeedSet::new(g.node_count(), init),
            consumed: vec![false; g.node_count()],
            harmonic: HashMap::new(),
        }
    }

    fn eligible(&self, v: NodeId) -> bool {
        !self.seeds.contains(v) && !self.consumed[v]
    }

    fn pool(&self) -> Vec<NodeId> {
        let min = (0..self.g.node_count()).filter(|&v| self.eligible(v)).map(|v| self.g.degree(v)).min();
        match min {
            Some(d) => (0..self.g.node_count()).filter(|&v| self.eligible(v) && self.g.degree(v) == d).collect(),
            None => Vec::new(),
        }
    }

    fn harmonic(&mut self, v: NodeId) -> f64 {
        let g = self.g;
        *self.harmonic.entry(v).or_insert_with(|| harmonic_of(g, v))
    }

    fn neighbor_degree_sum(&self, v: NodeId) -> usize {
        self.g.neighbors(v).iter().map(|&u| self.g.degree(u)).sum()
    }

    /// Best pool member under the variant's tie-break; pool is ascending by id.
    fn pick(&mut self, pool: &[NodeId]) -> NodeId {
        if pool.len() == 1 {
            return pool[0];
        }
        match self.variant {
            MinDegreeVariant::Hc | MinDegreeVariant::Hcn => {
                let mut best = pool[0];
                let mut best_h = self.harmonic(best);
                for &v in &pool[1..] {
                    let h = self.harmonic(v);
                    if h < best_h {
                        best = v;
                        best_h = h;
                    }
                }
                best
            }
            MinDegreeVariant::Nd | MinDegreeVariant::Ndn => {
                let mut best = pool[0];
                let mut best_s = self.neighbor_degree_sum(best);
                for &v in &pool[1..] {
                    let s = self.neighbor_degree_sum(v);
                    if s > best_s {
                        best = v;
                        best_s = s;
                    }
                }
                best
            }
        }
    }
}

impl IncrementalSeeder for MinDegree<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        loop {
            let pool = self.pool();
            if pool.is_empty() {
                return Err(SeedError::Exhausted { found: self.seeds.chosen() });
            }
            let x = self.pick(&pool);
            let chosen = if self.variant.takes_neighbor() {
                neighbor_of_candidate(self.g, x, &self.seeds, &mut self.consumed)
            } else {
                Some(x)
            };
            if let Some(v) = chosen {
                self.seeds.push(v);
                return Ok(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{select_seeds, AlgorithmId, SeedError, SeederParams};
    use crate::graph::generate;

    fn run(id: AlgorithmId, g: &crate::graph::Graph, init: usize, k: usize) -> Result<Vec<usize>, SeedError> {
        select_seeds(id, g, init, k, &SeederParams::new(0.5)).map(|s| s.chosen)
    }

    #[test]
    fn least_central_traces() {
        let star = generate::star(3);
        assert_eq!(run(AlgorithmId::LeastCentral, &star, 0, 2).unwrap(), vec![1, 2]);
        assert_eq!(run(AlgorithmId::LeastCentralN, &star, 3, 1).unwrap(), vec![0]);
        let p5 = generate::path(5);
        assert_eq!(run(AlgorithmId::LeastCentral, &p5, 2, 2).unwrap(), vec![0, 4]);
    }

    #[test]
    fn least_central_n_exhausts_on_star() {
        let star = generate::star(3);
        match run(AlgorithmId::LeastCentralN, &star, 3, 2) {
            Err(SeedError::Exhausted { found }) => assert_eq!(found, vec![0]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn min_degree_traces() {
        let star = generate::star(3);
        assert_eq!(run(AlgorithmId::MinDegreeHc, &star, 0, 2).unwrap(), vec![1, 2]);
        assert_eq!(run(AlgorithmId::MinDegreeHcn, &star, 3, 1).unwrap(), vec![0]);
        let p5 = generate::path(5);
        assert_eq!(run(AlgorithmId::MinDegreeNd, &p5, 2, 1).unwrap(), vec![0]);
        assert_eq!(run(AlgorithmId::MinDegreeNdn, &p5, 2, 2).unwrap(), vec![1, 3]);
    }

    #[test]
    fn hc_uses_harmonic_tie_break() {
        // Leaves 3 and 5 both have degree 1; harmonic(3) = 29/12 < harmonic(5) = 31/12.
        let g = crate::graph::Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (1, 4)]).unwrap();
        assert_eq!(run(AlgorithmId::MinDegreeHc, &g, 0, 1).unwrap(), vec![3]);
    }

    #[test]
    fn distinct_degrees_skip_harmonic() {
        // Degrees 1,3,2,2,... the unique minimum is picked directly.
        let g = crate::graph::Graph::from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(run(AlgorithmId::MinDegreeHc, &g, 1, 1).unwrap(), vec![0]);
    }
}
