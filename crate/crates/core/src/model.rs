//! Instance and capacity-plan data model.
//!
//! An [`Instance`] is an undirected multigraph with nonnegative rational edge
//! weights, a root node and a list of colors (terminal sets). A
//! [`CapacityPlan`] assigns a capacity to every edge. Every color must be able
//! to route one unit per terminal to the root simultaneously; different colors
//! share capacity.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::paths::DisjointSets;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type Weight = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance must have at least one node")]
    NoNodes,
    #[error("root {0} out of range")]
    RootOutOfRange(NodeId),
    #[error("edge {edge}: endpoint {node} out of range")]
    EndpointOutOfRange { edge: EdgeId, node: NodeId },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edge {0} has negative weight")]
    NegativeWeight(EdgeId),
    #[error("color {0} is empty")]
    EmptyColor(usize),
    #[error("color {0} contains root")]
    ColorContainsRoot(usize),
    #[error("color {color} references unknown node {node}")]
    UnknownColorNode { color: usize, node: NodeId },
    #[error("color {color} lists node {node} twice")]
    DuplicateColorNode { color: usize, node: NodeId },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("plan has {plan} entries but instance has {edges} edges")]
    PlanLength { plan: usize, edges: usize },
    #[error("expected exactly 2 colors, found {0}")]
    ColorCount(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid capacity {value} on edge {edge}")]
    InvalidCapacity { edge: EdgeId, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Weight,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: Weight) -> Self {
        Edge { u, v, weight }
    }

    /// The endpoint opposite `x`. `x` must be an endpoint.
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// Immutable, validated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    node_count: usize,
    root: NodeId,
    edges: Vec<Edge>,
    colors: Vec<Vec<NodeId>>,
    dummies: BTreeSet<NodeId>,
}

impl Instance {
    /// Validates and builds an instance. Colors are stored as sorted sets.
    pub fn new(
        node_count: usize,
        root: NodeId,
        edges: Vec<Edge>,
        colors: Vec<Vec<NodeId>>,
    ) -> Result<Self, InstanceError> {
        if node_count == 0 {
            return Err(InstanceError::NoNodes);
        }
        if root >= node_count {
            return Err(InstanceError::RootOutOfRange(root));
        }
        for (id, e) in edges.iter().enumerate() {
            for node in [e.u, e.v] {
                if node >= node_count {
                    return Err(InstanceError::EndpointOutOfRange { edge: id, node });
                }
            }
            if e.u == e.v {
                return Err(InstanceError::SelfLoop(id));
            }
            if e.weight < Weight::zero() {
                return Err(InstanceError::NegativeWeight(id));
            }
        }
        let mut sorted_colors = Vec::with_capacity(colors.len());
        for (c, members) in colors.into_iter().enumerate() {
            if members.is_empty() {
                return Err(InstanceError::EmptyColor(c));
            }
            let mut set = BTreeSet::new();
            for node in members {
                if node >= node_count {
                    return Err(InstanceError::UnknownColorNode { color: c, node });
                }
                if node == root {
                    return Err(InstanceError::ColorContainsRoot(c));
                }
                if !set.insert(node) {
                    return Err(InstanceError::DuplicateColorNode { color: c, node });
                }
            }
            sorted_colors.push(set.into_iter().collect());
        }
        Ok(Instance {
            node_count,
            root,
            edges,
            colors: sorted_colors,
            dummies: BTreeSet::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> &[Vec<NodeId>] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &[NodeId] {
        &self.colors[i]
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Largest color size, the most capacity any single edge can need.
    pub fn max_color_size(&self) -> usize {
        self.colors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every node that belongs to at least one color.
    pub fn terminals(&self) -> BTreeSet<NodeId> {
        self.colors.iter().flatten().copied().collect()
    }

    /// Nodes introduced by [`pad_colors`].
    pub fn dummies(&self) -> &BTreeSet<NodeId> {
        &self.dummies
    }

    pub fn is_dummy(&self, node: NodeId) -> bool {
        self.dummies.contains(&node)
    }

    /// Per node, the incident `(edge id, neighbor)` pairs in edge-id order.
    pub fn adjacency(&self) -> Vec<Vec<(EdgeId, NodeId)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((id, e.v));
            adj[e.v].push((id, e.u));
        }
        adj
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn has_integral_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_integer())
    }

    /// Edges crossing the cut `(set, V \ set)`.
    pub fn boundary(&self, set: &BTreeSet<NodeId>) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| set.contains(&e.u) != set.contains(&e.v))
            .map(|(id, _)| id)
            .collect()
    }

    /// The cut requirement: the largest number of terminals of one color in `set`.
    pub fn requirement(&self, set: &BTreeSet<NodeId>) -> usize {
        self.colors
            .iter()
            .map(|c| c.iter().filter(|t| set.contains(t)).count())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    Integral,
    Fractional,
}

impl fmt::Display for PlanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanMode::Integral => "integral",
            PlanMode::Fractional => "fractional",
        })
    }
}

/// Per-edge capacities, indexed by edge id.
#[derive(Debug, Clone, PartialEq)]
pub enum CapacityPlan {
    Integral(Vec<u64>),
    Fractional(Vec<f64>),
}

impl CapacityPlan {
    pub fn zeros(mode: PlanMode, len: usize) -> Self {
        match mode {
            PlanMode::Integral => CapacityPlan::Integral(vec![0; len]),
            PlanMode::Fractional => CapacityPlan::Fractional(vec![0.0; len]),
        }
    }

    /// Builds a fractional plan, rejecting negative or non-finite entries.
    pub fn fractional(values: Vec<f64>) -> Result<Self, ModelError> {
        if let Some((edge, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(ModelError::InvalidCapacity { edge, value });
        }
        Ok(CapacityPlan::Fractional(values))
    }

    pub fn mode(&self) -> PlanMode {
        match self {
            CapacityPlan::Integral(_) => PlanMode::Integral,
            CapacityPlan::Fractional(_) => PlanMode::Fractional,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CapacityPlan::Integral(v) => v.len(),
            CapacityPlan::Fractional(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, edge: EdgeId) -> f64 {
        match self {
            CapacityPlan::Integral(v) => v[edge] as f64,
            CapacityPlan::Fractional(v) => v[edge],
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|e| self.value(e)).collect()
    }

    /// Edges carrying nonzero capacity.
    pub fn support(&self) -> Vec<EdgeId> {
        (0..self.len()).filter(|&e| self.value(e) > 0.0).collect()
    }

    pub fn check_len(&self, inst: &Instance) -> Result<(), ModelError> {
        if self.len() != inst.edge_count() {
            return Err(ModelError::PlanLength {
                plan: self.len(),
                edges: inst.edge_count(),
            });
        }
        Ok(())
    }
}

/// Plan cost: exact for integral plans, floating point for fractional ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cost {
    Exact(Weight),
    Approx(f64),
}

impl Cost {
    pub fn to_f64(self) -> f64 {
        match self {
            Cost::Exact(w) => w.to_f64().unwrap_or(f64::NAN),
            Cost::Approx(x) => x,
        }
    }

    pub fn exact(self) -> Option<Weight> {
        match self {
            Cost::Exact(w) => Some(w),
            Cost::Approx(_) => None,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Exact(w) => f.write_str(&crate::text::format_weight(w)),
            Cost::Approx(x) => f.write_str(&crate::text::format_float(*x)),
        }
    }
}

/// A cut-covering constraint `x(δ(S)) ≥ |C_i ∩ S|` witnessed by color `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutConstraint {
    pub node_set: BTreeSet<NodeId>,
    pub rhs: usize,
    pub witness_color: usize,
}

impl CutConstraint {
    /// Left-hand side `x(δ(S))` under `plan`.
    pub fn lhs(&self, inst: &Instance, plan: &CapacityPlan) -> f64 {
        inst.boundary(&self.node_set)
            .into_iter()
            .map(|e| plan.value(e))
            .sum()
    }
}

impl fmt::Display for CutConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cut color={} rhs={} S=", self.witness_color, self.rhs)?;
        let ids: Vec<String> = self.node_set.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

pub fn plan_cost(inst: &Instance, plan: &CapacityPlan) -> Result<Cost, ModelError> {
    plan.check_len(inst)?;
    Ok(match plan {
        CapacityPlan::Integral(x) => Cost::Exact(
            inst.edges
                .iter()
                .zip(x)
                .map(|(e, &c)| e.weight * Weight::from_integer(c as i64))
                .sum(),
        ),
        CapacityPlan::Fractional(x) => Cost::Approx(
            inst.edges
                .iter()
                .zip(x)
                .map(|(e, &c)| e.weight.to_f64().unwrap_or(f64::NAN) * c)
                .sum(),
        ),
    })
}

/// Result of [`expand_parallel`]: the expanded instance and, per new edge, the
/// id of the original edge it copies.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub instance: Instance,
    pub origin: Vec<EdgeId>,
}

impl Expansion {
    /// Sums the capacities of all copies of each original edge.
    pub fn aggregate(&self, plan: &CapacityPlan, original_edges: usize) -> CapacityPlan {
        let mut out = CapacityPlan::zeros(plan.mode(), original_edges);
        match (&mut out, plan) {
            (CapacityPlan::Integral(dst), CapacityPlan::Integral(src)) => {
                for (copy, &orig) in self.origin.iter().enumerate() {
                    dst[orig] += src[copy];
                }
            }
            (CapacityPlan::Fractional(dst), CapacityPlan::Fractional(src)) => {
                for (copy, &orig) in self.origin.iter().enumerate() {
                    dst[orig] += src[copy];
                }
            }
            _ => unreachable!("mode preserved by zeros"),
        }
        out
    }
}

/// Replaces every edge by `max_i |C_i|` parallel copies of the same weight, so
/// that 0/1 capacities suffice. Copies of one edge are contiguous.
pub fn expand_parallel(inst: &Instance) -> Expansion {
    let copies = inst.max_color_size().max(1);
    let mut edges = Vec::with_capacity(inst.edge_count() * copies);
    let mut origin = Vec::with_capacity(inst.edge_count() * copies);
    for (id, e) in inst.edges.iter().enumerate() {
        for _ in 0..copies {
            edges.push(e.clone());
            origin.push(id);
        }
    }
    let instance = Instance {
        edges,
        ..inst.clone()
    };
    Expansion { instance, origin }
}

/// Balances two colors by adding dummy terminals joined to the root by
/// zero-weight edges. Dummies get fresh ids after the existing nodes.
pub fn pad_colors(inst: &Instance) -> Result<Instance, ModelError> {
    if inst.color_count() != 2 {
        return Err(ModelError::ColorCount(inst.color_count()));
    }
    let mut out = inst.clone();
    let (small, large) = if out.colors[0].len() <= out.colors[1].len() {
        (0, 1)
    } else {
        (1, 0)
    };
    let missing = out.colors[large].len() - out.colors[small].len();
    for _ in 0..missing {
        let dummy = out.node_count;
        out.node_count += 1;
        out.edges.push(Edge::new(out.root, dummy, Weight::zero()));
        out.colors[small].push(dummy);
        out.dummies.insert(dummy);
    }
    Ok(out)
}

/// Weight of a minimum spanning tree (Kruskal).
pub fn mst_cost(inst: &Instance) -> Result<Weight, ModelError> {
    let mut order: Vec<EdgeId> = (0..inst.edge_count()).collect();
    order.sort_by(|&a, &b| {
        inst.edges[a]
            .weight
            .cmp(&inst.edges[b].weight)
            .then(a.cmp(&b))
    });
    let mut sets = DisjointSets::new(inst.node_count);
    let mut total = Weight::zero();
    let mut joined = 0;
    for id in order {
        let e = &inst.edges[id];
        if sets.union(e.u, e.v) {
            total += e.weight;
            joined += 1;
        }
    }
    if joined + 1 != inst.node_count {
        return Err(ModelError::Disconnected);
    }
    Ok(total)
}
