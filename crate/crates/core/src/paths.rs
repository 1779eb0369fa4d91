//! Shortest paths, connectivity and union-find over [`Instance`] graphs.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_traits::Zero;

use crate::model::{EdgeId, Instance, NodeId, Weight};

pub struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        true
    }
}

/// Single-source shortest paths with a deterministic predecessor tree.
///
/// Nodes are settled in `(distance, id)` order; a settled node's predecessor
/// is the already-settled neighbor `u` with `d(u) + w = d(v)` of least id,
/// then least edge id. Zero-weight edges cannot create predecessor cycles.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: NodeId,
    pub dist: Vec<Option<Weight>>,
    pub pred: Vec<Option<(EdgeId, NodeId)>>,
    /// Settling order, starting with the source.
    pub order: Vec<NodeId>,
}

impl ShortestPaths {
    pub fn from(inst: &Instance, source: NodeId) -> Self {
        let adj = inst.adjacency();
        Self::with_adjacency(inst, &adj, source)
    }

    pub fn with_adjacency(inst: &Instance, adj: &[Vec<(EdgeId, NodeId)>], source: NodeId) -> Self {
        let n = inst.node_count();
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        let mut pred = vec![None; n];
        let mut settled = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut heap = BinaryHeap::new();
        dist[source] = Some(Weight::zero());
        heap.push(Reverse((Weight::zero(), source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if settled[v] || dist[v] != Some(d) {
                continue;
            }
            settled[v] = true;
            order.push(v);
            if v != source {
                pred[v] = adj[v]
                    .iter()
                    .filter(|&&(e, u)| {
                        settled[u] && u != v && dist[u].unwrap() + inst.edge(e).weight == d
                    })
                    .map(|&(e, u)| (u, e))
                    .min()
                    .map(|(u, e)| (e, u));
            }
            for &(e, u) in &adj[v] {
                let nd = d + inst.edge(e).weight;
                if !settled[u] && dist[u].is_none_or(|old| nd < old) {
                    dist[u] = Some(nd);
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        ShortestPaths {
            source,
            dist,
            pred,
            order,
        }
    }

    pub fn reachable(&self, v: NodeId) -> bool {
        self.dist[v].is_some()
    }

    /// Edge ids of the tree path from `v` back to the source, in walking order.
    pub fn path_edges(&self, mut v: NodeId) -> Option<Vec<EdgeId>> {
        self.dist[v]?;
        let mut out = Vec::new();
        while let Some((e, u)) = self.pred[v] {
            out.push(e);
            v = u;
        }
        Some(out)
    }

    /// Node sequence from `v` to the source along the tree.
    pub fn path_nodes(&self, mut v: NodeId) -> Option<Vec<NodeId>> {
        self.dist[v]?;
        let mut out = vec![v];
        while let Some((_, u)) = self.pred[v] {
            out.push(u);
            v = u;
        }
        Some(out)
    }
}

/// All-pairs shortest paths, one Dijkstra tree per source.
#[derive(Debug, Clone)]
pub struct AllPairs {
    trees: Vec<ShortestPaths>,
}

impl AllPairs {
    pub fn new(inst: &Instance) -> Self {
        let adj = inst.adjacency();
        AllPairs {
            trees: (0..inst.node_count())
                .map(|s| ShortestPaths::with_adjacency(inst, &adj, s))
                .collect(),
        }
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> Option<Weight> {
        self.trees[a].dist[b]
    }

    pub fn tree(&self, source: NodeId) -> &ShortestPaths {
        &self.trees[source]
    }

    pub fn node_count(&self) -> usize {
        self.trees.len()
    }
}

/// Nodes reachable from `start`.
pub fn component_of(inst: &Instance, start: NodeId) -> BTreeSet<NodeId> {
    let adj = inst.adjacency();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(_, u) in &adj[v] {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen
}

pub fn is_connected(inst: &Instance) -> bool {
    component_of(inst, inst.root()).len() == inst.node_count()
}

/// First terminal (in id order) that cannot reach the root, if any.
pub fn disconnected_terminal(inst: &Instance) -> Option<NodeId> {
    let reach = component_of(inst, inst.root());
    inst.terminals().into_iter().find(|t| !reach.contains(t))
}
