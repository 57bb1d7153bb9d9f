//! Simple undirected graphs over dense node ids.
//!
//! Adjacency is stored in compressed sparse row form with each neighbor list
//! sorted ascending, so every traversal in the crate visits neighbors in a
//! fixed order.

mod features;
pub mod generate;
mod io;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use features::{compute_features, NetworkFeatures};
pub use io::{load_edge_list, parse_edge_list};

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("graph has no edges")]
    Empty,
    #[error("node {node} out of range for graph with {n} nodes")]
    OutOfRange { node: NodeId, n: usize },
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Network domain label used as a categorical feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Biological,
    Social,
    Economic,
    Technological,
    Transportation,
    Informational,
    #[default]
    Unknown,
}

impl Domain {
    pub const ALL: [Domain; 7] = [
        Domain::Biological,
        Domain::Social,
        Domain::Economic,
        Domain::Technological,
        Domain::Transportation,
        Domain::Informational,
        Domain::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Biological => "biological",
            Domain::Social => "social",
            Domain::Economic => "economic",
            Domain::Technological => "technological",
            Domain::Transportation => "transportation",
            Domain::Informational => "informational",
            Domain::Unknown => "unknown",
        }
    }

    pub fn index(self) -> usize {
        Domain::ALL.iter().position(|d| *d == self).unwrap()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Domain::ALL
            .iter()
            .copied()
            .find(|d| d.as_str() == lower)
            .ok_or_else(|| GraphError::UnknownDomain(s.to_string()))
    }
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    edge_count: usize,
    labels: Vec<String>,
    name: Option<String>,
    domain: Domain,
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops and duplicate edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut lists: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::OutOfRange { node, n });
                }
            }
            if u == v {
                continue;
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let edge_count = targets.len() / 2;
        Ok(Graph {
            offsets,
            targets,
            edge_count,
            labels: (0..n).map(|i| i.to_string()).collect(),
            name: None,
            domain: Domain::Unknown,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Replaces the original-label mapping. `labels.len()` must equal `n`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.node_count(), "label count mismatch");
        self.labels = labels;
        self
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Original token of a node as it appeared in the source file.
    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Neighbors of `v`, sorted ascending. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn try_neighbors(&self, v: NodeId) -> Result<&[NodeId], GraphError> {
        self.check_node(v)?;
        Ok(self.neighbors(v))
    }

    pub fn try_degree(&self, v: NodeId) -> Result<usize, GraphError> {
        self.check_node(v)?;
        Ok(self.degree(v))
    }

    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { node: v, n: self.node_count() })
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Connected components as sorted node lists, ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().len() == 1
    }

    /// Restricts the graph to its largest connected component. Ties between
    /// equal-size components go to the one holding the smallest node id.
    /// Surviving nodes keep their relative order and original labels.
    pub fn largest_component(&self) -> Graph {
        let comps = self.components();
        let Some(best) = comps.iter().fold(None::<&Vec<NodeId>>, |best, c| match best {
            Some(b) if b.len() >= c.len() => Some(b),
            _ => Some(c),
        }) else {
            return self.clone();
        };
        if best.len() == self.node_count() {
            return self.clone();
        }
        self.induced(best)
    }

    /// Subgraph induced by `keep` (sorted, unique), re-densified in that order.
    pub fn induced(&self, keep: &[NodeId]) -> Graph {
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| remap[u] != usize::MAX && remap[v] != usize::MAX)
            .map(|(u, v)| (remap[u], remap[v]))
            .collect();
        let mut g = Graph::from_edges(keep.len(), edges).expect("remapped ids in range");
        g.labels = keep.iter().map(|&old| self.labels[old].clone()).collect();
        g.name = self.name.clone();
        g.domain = self.domain;
        g
    }
}
