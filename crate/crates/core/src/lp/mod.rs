//! Cut-covering LP relaxation and exact integer solver.

mod branch;
mod cutting;
pub mod simplex;

use thiserror::Error;

pub use branch::{budget_from_env, solve_exact, ExactOutcome, Incumbent, DEFAULT_NODE_BUDGET};
pub use cutting::{separate, solve_lp, CutPool, LpOutcome};
pub use simplex::SimplexError;

use crate::approx::ApproxError;
use crate::flow::FlowError;
use crate::model::{ModelError, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("terminal {0} is disconnected from the root")]
    Disconnected(NodeId),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error("separation produced no new cut")]
    Stalled,
    #[error("node budget exhausted after {nodes} nodes (lower bound {lower_bound})")]
    BudgetExceeded {
        incumbent: Option<Box<Incumbent>>,
        lower_bound: f64,
        nodes: u64,
    },
}
