//! Max-flow primitives, plan feasibility, routings and split diagnostics.

pub mod maxflow;
pub mod routing;
pub mod split;

pub use maxflow::{max_flow, Capacity, FlowNetwork, FlowProblem, MaxFlowResult};
pub use routing::{
    check_feasible, color_flow, deficient_colors, extract_routing, Direction, Feasibility,
    FlowError, Routing, Step, Walk, FEASIBILITY_TOL,
};
pub use split::{
    split_report, CostSplit, Split, SplitError, SplitGraph, SplitKind, SplitReport, SplitVertex,
};
