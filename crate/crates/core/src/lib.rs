//! Solver toolkit for single-sink fractionally-subadditive network design.
//!
//! Given an undirected weighted graph, a root and `k` colors (terminal sets),
//! find integer edge capacities of least cost such that, for each color on its
//! own, every terminal of that color can send one unit to the root at the same
//! time. The cut requirement of a node set `S` is `f(S) = max_i |C_i ∩ S|`.

pub mod approx;
pub mod cli;
pub mod fixtures;
pub mod flow;
pub mod generators;
pub mod latency;
pub mod lp;
pub mod model;
pub mod paths;
pub mod text;

pub use model::{
    CapacityPlan, Cost, CutConstraint, Edge, EdgeId, Instance, NodeId, PlanMode, Weight,
};
