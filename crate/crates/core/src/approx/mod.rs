//! Approximation algorithms: two-color matching, shortest-path trees and
//! tree embeddings.

mod frt;
mod hungarian;
mod matching;
mod steiner;

use thiserror::Error;

pub use frt::{frt_embed, frt_solve, Cluster, HstTree};
pub use hungarian::min_cost_assignment;
pub use matching::{matching_solve, shortest_path_bound, shortest_path_solve, Pair, PairingResult};
pub use steiner::{steiner_with, three_terminal_steiner, SteinerTree};

use crate::model::{ModelError, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("node {0} is disconnected from the root")]
    Disconnected(NodeId),
    #[error(transparent)]
    Model(#[from] ModelError),
}
