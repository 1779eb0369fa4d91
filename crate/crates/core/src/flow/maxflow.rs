//! Dinic's algorithm over integer or floating-point capacities.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Debug;
use std::ops::{Add, Sub};

use crate::model::NodeId;

/// Capacity scalar. Integers are exact; floats treat anything at or below
/// [`FLOAT_EPS`] as empty.
pub trait Capacity: Copy + Debug + PartialOrd + Add<Output = Self> + Sub<Output = Self> {
    fn zero() -> Self;
    fn is_positive(self) -> bool;
    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

pub const FLOAT_EPS: f64 = 1e-12;

impl Capacity for i64 {
    fn zero() -> Self {
        0
    }
    fn is_positive(self) -> bool {
        self > 0
    }
}

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_positive(self) -> bool {
        self > FLOAT_EPS
    }
}

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    residual: C,
    rev: usize,
}

/// Residual network. Arc ids are returned by [`FlowNetwork::add_arc`].
#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc<C>>,
    capacity: Vec<C>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
            capacity: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from → to` and its zero-capacity reverse; returns the forward id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: C) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc {
            to,
            residual: cap,
            rev: id + 1,
        });
        self.arcs.push(Arc {
            to: from,
            residual: C::zero(),
            rev: id,
        });
        self.capacity.push(cap);
        self.capacity.push(C::zero());
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently pushed on a forward arc.
    pub fn flow(&self, arc: usize) -> C {
        self.capacity[arc] - self.arcs[arc].residual
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.node_count()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.residual.is_positive() && level[arc.to] == usize::MAX {
                    level[arc.to] = level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn augment(&mut self, v: usize, t: usize, pushed: C, level: &[usize], next: &mut [usize]) -> C {
        if v == t {
            return pushed;
        }
        while next[v] < self.adj[v].len() {
            let a = self.adj[v][next[v]];
            let (to, residual) = (self.arcs[a].to, self.arcs[a].residual);
            if residual.is_positive() && level[to] == level[v] + 1 {
                let got = self.augment(to, t, C::min_of(pushed, residual), level, next);
                if got.is_positive() {
                    let rev = self.arcs[a].rev;
                    self.arcs[a].residual = self.arcs[a].residual - got;
                    self.arcs[rev].residual = self.arcs[rev].residual + got;
                    return got;
                }
            }
            next[v] += 1;
        }
        C::zero()
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: C) -> C {
        let mut total = C::zero();
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.node_count()];
            loop {
                let room = limit - total;
                if !room.is_positive() {
                    return total;
                }
                let got = self.augment(s, t, room, &level, &mut next);
                if !got.is_positive() {
                    break;
                }
                total = total + got;
            }
        }
        total
    }

    /// Nodes reachable from `s` through arcs with positive residual capacity.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.residual.is_positive() && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

/// Multi-source single-sink flow problem.
#[derive(Debug, Clone)]
pub struct FlowProblem<C> {
    pub node_count: usize,
    /// Directed arcs `(from, to, capacity)`.
    pub arcs: Vec<(NodeId, NodeId, C)>,
    /// `(node, supply)`; each becomes an arc from a super-source.
    pub sources: Vec<(NodeId, C)>,
    pub sink: NodeId,
}

#[derive(Debug, Clone)]
pub struct MaxFlowResult<C> {
    pub value: C,
    /// Source side of a minimum cut, without the super-source.
    pub min_cut: BTreeSet<NodeId>,
    /// Flow on each input arc, in input order.
    pub arc_flows: Vec<C>,
}

pub fn max_flow<C: Capacity>(problem: &FlowProblem<C>) -> MaxFlowResult<C> {
    let n = problem.node_count;
    let source = n;
    let mut net = FlowNetwork::new(n + 1);
    let ids: Vec<usize> = problem
        .arcs
        .iter()
        .map(|&(u, v, c)| net.add_arc(u, v, c))
        .collect();
    let mut supply = C::zero();
    for &(v, s) in &problem.sources {
        debug_assert!(v != problem.sink || !s.is_positive());
        net.add_arc(source, v, s);
        supply = supply + s;
    }
    let value = net.max_flow(source, problem.sink, supply);
    let reach = net.reachable_from(source);
    MaxFlowResult {
        value,
        min_cut: (0..n).filter(|&v| reach[v]).collect(),
        arc_flows: ids.iter().map(|&a| net.flow(a)).collect(),
    }
}
