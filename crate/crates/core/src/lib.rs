//! Maximin influence maximization.
//!
//! Choose seed nodes in an undirected network so that, under the independent
//! cascade model, the least-reached node is reached with the highest possible
//! probability. The crate provides the cascade estimators, fourteen seeding
//! heuristics, the slope-based evaluation metric and the algorithm-selection
//! machinery built on top of it.

pub mod cascade;
pub mod centrality;
pub mod eval;
pub mod graph;
pub mod meta;
pub mod seeders;

pub use cascade::{AccessEstimate, AccessOracle, CascadeConfig, Regime};
pub use graph::{Domain, Graph, NodeId};
pub use seeders::{AlgorithmId, SeedSequence, SeederParams};
