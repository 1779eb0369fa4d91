//! Latency objective: a single root-anchored walk whose cost is the sum of
//! the prefix lengths needed to cover `j` terminals of every color.
//!
//! Solutions are walks; vertices and edges may repeat.

mod cover;
mod exact;
mod round;
mod walk;

use thiserror::Error;

pub use cover::{eulerify, greedy_cover_sequence, greedy_cover_tree, CoverTree};
pub use exact::{latency_exact, MAX_EXACT_TERMINALS};
pub use round::{greedy_ladder, latency_round, latency_round_sampled, latency_solve_greedy};
pub use walk::{walk_cost, LatencyWalk};

use crate::model::{Instance, NodeId, Weight};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatencyError {
    #[error("latency operations need integral edge weights")]
    NotIntegral,
    #[error("walk does not start at the root")]
    NotRooted,
    #[error("walk visits unknown node {0}")]
    UnknownNode(NodeId),
    #[error("nodes {0} and {1} are not adjacent")]
    NotAdjacent(NodeId, NodeId),
    #[error("walk covers {reached} of {needed} levels")]
    Incomplete { reached: usize, needed: usize },
    #[error("terminal {0} is disconnected from the root")]
    Disconnected(NodeId),
    #[error("{0} terminals exceed the exact solver limit")]
    TooLarge(usize),
    #[error("cannot cover {target} terminals of a color with {available} available")]
    Uncoverable { target: usize, available: usize },
    #[error("tree does not contain the root")]
    TreeMissingRoot,
    #[error("edge set is not a tree")]
    NotATree,
    #[error("tree of weight {weight} exceeds scale {scale}")]
    TreeOverScale { scale: u64, weight: Weight },
    #[error("last tree does not cover every level")]
    FinalTreeIncomplete,
}

pub(crate) fn require_integral(inst: &Instance) -> Result<(), LatencyError> {
    if inst.has_integral_weights() {
        Ok(())
    } else {
        Err(LatencyError::NotIntegral)
    }
}
