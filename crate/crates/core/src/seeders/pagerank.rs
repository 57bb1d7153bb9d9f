use super::prior::NaiveMyopic;
use super::{argmin_non_seed, IncrementalSeeder, SeedError, SeedSet};
use crate::centrality::{ppr, PprParams};
use crate::graph::{Graph, NodeId};

/// Low personalized PageRank, restarting at the current seed set, stands in
/// for low access probability.
pub struct MyopicPpr<'g> {
    g: &'g Graph,
    params: PprParams,
    seeds: SeedSet,
}

impl<'g> MyopicPpr<'g> {
    pub fn new(g: &'g Graph, init: NodeId, params: PprParams) -> Self {
        MyopicPpr { g, params, seeds: SeedSet::new(g.node_count(), init) }
    }
}

impl IncrementalSeeder for MyopicPpr<'_> {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        let scores = ppr(self.g, &self.seeds.order, self.params)?;
        let v = argmin_non_seed(&scores.scores, &self.seeds)
            .ok_or_else(|| SeedError::Exhausted { found: self.seeds.chosen() })?;
        self.seeds.push(v);
        Ok(v)
    }
}

pub struct NaiveMyopicPpr(NaiveMyopic);

impl NaiveMyopicPpr {
    pub fn new(g: &Graph, init: NodeId, params: PprParams) -> Result<Self, SeedError> {
        let scores = ppr(g, &[init], params)?;
        Ok(NaiveMyopicPpr(NaiveMyopic::from_scores(&scores.scores, init)))
    }
}

impl IncrementalSeeder for NaiveMyopicPpr {
    fn next_seed(&mut self) -> Result<NodeId, SeedError> {
        self.0.next_seed()
    }
}
