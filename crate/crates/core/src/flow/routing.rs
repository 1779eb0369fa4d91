//! Feasibility of capacity plans and decomposition into per-terminal walks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::maxflow::{max_flow, Capacity, FlowProblem, MaxFlowResult};
use crate::model::{CapacityPlan, CutConstraint, EdgeId, Instance, ModelError, NodeId};

/// Slack allowed when checking fractional plans.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("routing needs an integral plan")]
    NotIntegral,
    #[error("plan is infeasible: {0}")]
    Infeasible(CutConstraint),
    #[error("invalid routing: {0}")]
    InvalidRouting(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible,
    Violation(CutConstraint),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// From `edge.u` to `edge.v`.
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: EdgeId,
    pub dir: Direction,
}

impl Step {
    pub fn tail(&self, inst: &Instance) -> NodeId {
        let e = inst.edge(self.edge);
        match self.dir {
            Direction::Forward => e.u,
            Direction::Backward => e.v,
        }
    }

    pub fn head(&self, inst: &Instance) -> NodeId {
        let e = inst.edge(self.edge);
        match self.dir {
            Direction::Forward => e.v,
            Direction::Backward => e.u,
        }
    }

    /// The step leaving `from` along `edge`.
    pub fn leaving(inst: &Instance, edge: EdgeId, from: NodeId) -> Step {
        let dir = if inst.edge(edge).u == from {
            Direction::Forward
        } else {
            Direction::Backward
        };
        Step { edge, dir }
    }
}

/// A terminal-to-root walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub terminal: NodeId,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn nodes(&self, inst: &Instance) -> Vec<NodeId> {
        let mut out = vec![self.terminal];
        out.extend(self.steps.iter().map(|s| s.head(inst)));
        out
    }
}

/// Per color, one walk per terminal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Routing {
    pub colors: Vec<BTreeMap<NodeId, Walk>>,
}

impl Routing {
    /// Builds a routing from node sequences (terminal first), taking the
    /// lowest-id edge between consecutive nodes.
    pub fn from_node_paths(
        inst: &Instance,
        colors: &[Vec<Vec<NodeId>>],
    ) -> Result<Routing, FlowError> {
        let adj = inst.adjacency();
        let mut out = Vec::with_capacity(colors.len());
        for paths in colors {
            let mut walks = BTreeMap::new();
            for nodes in paths {
                let Some(&terminal) = nodes.first() else {
                    return Err(FlowError::InvalidRouting("empty node path".into()));
                };
                let mut steps = Vec::with_capacity(nodes.len().saturating_sub(1));
                for p in nodes.windows(2) {
                    let e = adj
                        .get(p[0])
                        .and_then(|list| {
                            list.iter()
                                .filter(|&&(_, x)| x == p[1])
                                .map(|&(e, _)| e)
                                .min()
                        })
                        .ok_or_else(|| {
                            FlowError::InvalidRouting(format!(
                                "{} and {} are not adjacent",
                                p[0], p[1]
                            ))
                        })?;
                    steps.push(Step::leaving(inst, e, p[0]));
                }
                walks.insert(terminal, Walk { terminal, steps });
            }
            out.push(walks);
        }
        Ok(Routing { colors: out })
    }

    /// Checks walk shape, coverage of every terminal and, if a plan is given,
    /// that no color uses an edge more often than its capacity.
    pub fn validate(&self, inst: &Instance, plan: Option<&CapacityPlan>) -> Result<(), FlowError> {
        let bad = |msg: String| Err(FlowError::InvalidRouting(msg));
        if self.colors.len() != inst.color_count() {
            return bad(format!(
                "{} colors routed, instance has {}",
                self.colors.len(),
                inst.color_count()
            ));
        }
        for (i, walks) in self.colors.iter().enumerate() {
            let routed: Vec<NodeId> = walks.keys().copied().collect();
            if routed != inst.color(i) {
                return bad(format!(
                    "color {i} routes {routed:?}, expected {:?}",
                    inst.color(i)
                ));
            }
            let mut usage = vec![0u64; inst.edge_count()];
            for (&t, walk) in walks {
                if walk.terminal != t {
                    return bad(format!("walk keyed by {t} starts at {}", walk.terminal));
                }
                let mut at = t;
                for step in &walk.steps {
                    if step.edge >= inst.edge_count() {
                        return bad(format!("walk of {t} uses unknown edge {}", step.edge));
                    }
                    if step.tail(inst) != at {
                        return bad(format!(
                            "walk of {t} is not contiguous at edge {}",
                            step.edge
                        ));
                    }
                    at = step.head(inst);
                    usage[step.edge] += 1;
                }
                if at != inst.root() {
                    return bad(format!("walk of {t} ends at {at}, not the root"));
                }
            }
            if let Some(plan) = plan {
                plan.check_len(inst)?;
                for (e, &u) in usage.iter().enumerate() {
                    if u as f64 > plan.value(e) + FEASIBILITY_TOL {
                        return bad(format!(
                            "color {i} uses edge {e} {u} times, capacity {}",
                            plan.value(e)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Max-flow from the terminals of `color` to the root, each undirected edge
/// modeled by two opposite arcs of capacity `caps[e]` (arcs `2e`, `2e+1`).
pub fn color_flow<C: Capacity>(
    inst: &Instance,
    caps: &[C],
    color: usize,
    unit: C,
) -> MaxFlowResult<C> {
    let mut arcs = Vec::with_capacity(2 * inst.edge_count());
    for (e, edge) in inst.edges().iter().enumerate() {
        arcs.push((edge.u, edge.v, caps[e]));
        arcs.push((edge.v, edge.u, caps[e]));
    }
    max_flow(&FlowProblem {
        node_count: inst.node_count(),
        arcs,
        sources: inst.color(color).iter().map(|&t| (t, unit)).collect(),
        sink: inst.root(),
    })
}

fn cut_from(inst: &Instance, color: usize, flow_cut: BTreeSet<NodeId>) -> CutConstraint {
    let rhs = inst
        .color(color)
        .iter()
        .filter(|t| flow_cut.contains(t))
        .count();
    CutConstraint {
        node_set: flow_cut,
        rhs,
        witness_color: color,
    }
}

/// Every color whose flow falls short by more than `tol`, with its min cut and
/// shortfall.
pub fn deficient_colors(
    inst: &Instance,
    plan: &CapacityPlan,
    tol: f64,
) -> Result<Vec<(CutConstraint, f64)>, FlowError> {
    plan.check_len(inst)?;
    let mut out = Vec::new();
    for color in 0..inst.color_count() {
        let demand = inst.color(color).len();
        let (value, cut) = match plan {
            CapacityPlan::Integral(x) => {
                let caps: Vec<i64> = x.iter().map(|&c| c as i64).collect();
                let r = color_flow(inst, &caps, color, 1i64);
                (r.value as f64, r.min_cut)
            }
            CapacityPlan::Fractional(x) => {
                let r = color_flow(inst, x, color, 1.0f64);
                (r.value, r.min_cut)
            }
        };
        let slack = match plan {
            CapacityPlan::Integral(_) => 0.0,
            CapacityPlan::Fractional(_) => tol,
        };
        let shortfall = demand as f64 - value;
        if shortfall > slack {
            out.push((cut_from(inst, color, cut), shortfall));
        }
    }
    Ok(out)
}

/// Feasible iff every color can route all its terminals at once. Otherwise
/// returns the cut of the color with the largest shortfall (lowest index on ties).
pub fn check_feasible(inst: &Instance, plan: &CapacityPlan) -> Result<Feasibility, FlowError> {
    let deficits = deficient_colors(inst, plan, FEASIBILITY_TOL)?;
    let worst = deficits
        .into_iter()
        .fold(None::<(CutConstraint, f64)>, |best, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        });
    Ok(match worst {
        None => Feasibility::Feasible,
        Some((cut, _)) => Feasibility::Violation(cut),
    })
}

/// Decomposes a feasible integral plan into one cycle-free walk per terminal
/// per color. Terminals are processed in ascending id; at each node the
/// lowest-id edge with remaining flow is taken.
pub fn extract_routing(inst: &Instance, plan: &CapacityPlan) -> Result<Routing, FlowError> {
    let CapacityPlan::Integral(x) = plan else {
        return Err(FlowError::NotIntegral);
    };
    plan.check_len(inst)?;
    if let Feasibility::Violation(cut) = check_feasible(inst, plan)? {
        return Err(FlowError::Infeasible(cut));
    }
    let caps: Vec<i64> = x.iter().map(|&c| c as i64).collect();
    let adj = inst.adjacency();
    let mut colors = Vec::with_capacity(inst.color_count());
    for color in 0..inst.color_count() {
        let flow = color_flow(inst, &caps, color, 1i64);
        // Net flow per edge, positive meaning u → v.
        let mut net: Vec<i64> = (0..inst.edge_count())
            .map(|e| flow.arc_flows[2 * e] - flow.arc_flows[2 * e + 1])
            .collect();
        let mut walks = BTreeMap::new();
        for &t in inst.color(color) {
            let steps = trace_walk(inst, &adj, &mut net, t)?;
            walks.insert(t, Walk { terminal: t, steps });
        }
        colors.push(walks);
    }
    Ok(Routing { colors })
}

fn outflow(net: &[i64], inst: &Instance, e: EdgeId, from: NodeId) -> i64 {
    if inst.edge(e).u == from {
        net[e]
    } else {
        -net[e]
    }
}

fn consume(net: &mut [i64], inst: &Instance, step: Step) {
    match step.dir {
        Direction::Forward => net[step.edge] -= 1,
        Direction::Backward => net[step.edge] += 1,
    }
    debug_assert!(inst.edge(step.edge).u != inst.edge(step.edge).v);
}

fn trace_walk(
    inst: &Instance,
    adj: &[Vec<(EdgeId, NodeId)>],
    net: &mut [i64],
    terminal: NodeId,
) -> Result<Vec<Step>, FlowError> {
    let mut steps: Vec<Step> = Vec::new();
    let mut position: HashMap<NodeId, usize> = HashMap::from([(terminal, 0)]);
    let mut at = terminal;
    while at != inst.root() {
        let edge = adj[at]
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| outflow(net, inst, e, at) > 0)
            .min()
            .ok_or_else(|| {
                FlowError::InvalidRouting(format!("flow decomposition stuck at node {at}"))
            })?;
        let step = Step::leaving(inst, edge, at);
        let next = step.head(inst);
        steps.push(step);
        if let Some(&k) = position.get(&next) {
            // Closed a cycle: cancel it and resume from where it started.
            for s in steps.drain(k..) {
                consume(net, inst, s);
                position.remove(&s.head(inst));
            }
            position.insert(next, k);
        } else {
            position.insert(next, steps.len());
        }
        at = next;
    }
    for &s in &steps {
        consume(net, inst, s);
    }
    Ok(steps)
}
