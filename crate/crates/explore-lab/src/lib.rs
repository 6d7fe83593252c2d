//! Online graph exploration against adaptive gadget adversaries.
//!
//! An [`engine::ExplorationAlgorithm`] walks a [`engine::World`] one edge at
//! a time. [`adversary::AdversaryWorld`] builds the hard instance while the
//! walk happens, and [`analysis`] holds the exact bounds the walk is
//! measured against.

pub mod adversary;
pub mod algorithms;
pub mod analysis;
pub mod engine;
pub mod graph;
pub mod harness;

pub use adversary::{weight_lift, AdversaryWorld, Params, Topology};
pub use algorithms::{by_name, registry, Dfs, NearestNeighbor};
pub use engine::{replay_validate, run, ExplorationAlgorithm, KnowledgeView, StepBudget, Trace, World};
pub use graph::{Edge, VertexId, Weight, WeightedGraph};
