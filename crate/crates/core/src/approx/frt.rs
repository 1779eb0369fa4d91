//! Random hierarchically separated trees dominating the shortest-path metric.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ApproxError;
use crate::model::{CapacityPlan, EdgeId, Instance, NodeId, Weight};
use crate::paths::{component_of, AllPairs};

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// 0 for leaves.
    pub level: u32,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Graph nodes in the cluster.
    pub members: BTreeSet<NodeId>,
    /// Length of the edge to the parent; zero at the top.
    pub edge_length: Weight,
}

/// A laminar family of clusters; cluster 0 is the top and holds every node.
/// Nodes at graph distance zero share a leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct HstTree {
    pub clusters: Vec<Cluster>,
    pub leaf_of: Vec<usize>,
    /// Smallest nonzero graph distance; level lengths are multiples of it.
    pub unit: Weight,
    pub beta: f64,
}

impl HstTree {
    fn ancestors(&self, mut c: usize) -> Vec<usize> {
        let mut out = vec![c];
        while let Some(p) = self.clusters[c].parent {
            out.push(p);
            c = p;
        }
        out
    }

    /// Tree distance between the leaves of two graph nodes.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Weight {
        let up = self.ancestors(self.leaf_of[u]);
        let vp = self.ancestors(self.leaf_of[v]);
        let common: BTreeSet<usize> = up.iter().copied().filter(|c| vp.contains(c)).collect();
        up.iter()
            .chain(&vp)
            .filter(|c| !common.contains(c))
            .fold(Weight::zero(), |acc, &c| acc + self.clusters[c].edge_length)
    }

    /// Optimal cost of `inst` on the tree metric: each tree edge carries the
    /// largest number of one color's terminals on its side away from the root.
    pub fn solution_cost(&self, inst: &Instance) -> Weight {
        let r = inst.root();
        self.clusters
            .iter()
            .filter(|c| c.parent.is_some())
            .fold(Weight::zero(), |acc, c| {
                let holds_root = c.members.contains(&r);
                let need = inst
                    .colors()
                    .iter()
                    .map(|col| {
                        col.iter()
                            .filter(|v| c.members.contains(v) != holds_root)
                            .count()
                    })
                    .max()
                    .unwrap_or(0);
                acc + c.edge_length * Weight::from_integer(need as i64)
            })
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.clusters.len()).filter(|&c| self.clusters[c].children.is_empty())
    }
}

/// Groups nodes at mutual distance zero; classes are ordered by least member.
fn zero_classes(apsp: &AllPairs) -> Vec<Vec<NodeId>> {
    let n = apsp.node_count();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for v in 0..n {
        if class_of[v] != usize::MAX {
            continue;
        }
        let members: Vec<NodeId> = (v..n)
            .filter(|&u| apsp.dist(v, u) == Some(Weight::zero()))
            .collect();
        for &u in &members {
            class_of[u] = classes.len();
        }
        classes.push(members);
    }
    classes
}

/// Samples one tree: random `β ∈ [1,2)` and a random center order; level-`i`
/// clusters are balls of radius `β·2^(i-1)` (in units of the least nonzero
/// distance) carved from their parents, and a level-`i` cluster hangs from its
/// parent by an edge of length `2^(i+1)`.
pub fn frt_embed(inst: &Instance, seed: u64) -> Result<HstTree, ApproxError> {
    let reach = component_of(inst, inst.root());
    if let Some(v) = (0..inst.node_count()).find(|v| !reach.contains(v)) {
        return Err(ApproxError::Disconnected(v));
    }
    Ok(embed_with(&AllPairs::new(inst), seed))
}

pub(crate) fn embed_with(apsp: &AllPairs, seed: u64) -> HstTree {
    let n = apsp.node_count();
    let classes = zero_classes(apsp);
    let q = classes.len();
    let dist = |a: usize, b: usize| apsp.dist(classes[a][0], classes[b][0]).expect("connected");
    let unit = (0..q)
        .flat_map(|a| (a + 1..q).map(move |b| (a, b)))
        .map(|(a, b)| dist(a, b))
        .min()
        .unwrap_or_else(|| Weight::from_integer(1));
    let norm: Vec<Vec<f64>> = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| (dist(a, b) / unit).to_f64().unwrap_or(f64::INFINITY))
                .collect()
        })
        .collect();
    let diameter = norm.iter().flatten().copied().fold(0.0, f64::max);
    let mut top = 0u32;
    if q > 1 {
        top = 1;
        while 2f64.powi(top as i32 - 1) < diameter {
            top += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta: f64 = rng.gen_range(1.0..2.0);
    let mut order: Vec<usize> = (0..q).collect();
    order.shuffle(&mut rng);

    let all: BTreeSet<NodeId> = (0..n).collect();
    let mut clusters = vec![Cluster {
        level: top,
        parent: None,
        children: Vec::new(),
        members: all,
        edge_length: Weight::zero(),
    }];
    let mut class_sets: Vec<Vec<usize>> = vec![(0..q).collect()];
    let mut frontier = vec![0usize];
    for level in (0..top).rev() {
        let radius = beta * 2f64.powi(level as i32 - 1);
        let length = unit * Weight::from_integer(1i64 << (level + 1));
        let mut next = Vec::new();
        for &parent in &frontier {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &a in &class_sets[parent] {
                let center = order
                    .iter()
                    .position(|&c| norm[c][a] <= radius)
                    .expect("a class is within any radius of itself");
                groups.entry(center).or_default().push(a);
            }
            let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
            parts.sort_by_key(|p| p[0]);
            for part in parts {
                let id = clusters.len();
                let members = part
                    .iter()
                    .flat_map(|&a| classes[a].iter().copied())
                    .collect();
                clusters.push(Cluster {
                    level,
                    parent: Some(parent),
                    children: Vec::new(),
                    members,
                    edge_length: length,
                });
                clusters[parent].children.push(id);
                class_sets.push(part);
                next.push(id);
            }
        }
        frontier = next;
    }
    let mut leaf_of = vec![0; n];
    for &leaf in &frontier {
        for &v in &clusters[leaf].members {
            leaf_of[v] = leaf;
        }
    }
    HstTree {
        clusters,
        leaf_of,
        unit,
        beta,
    }
}

/// Solves on a sampled tree and maps it back. Each terminal follows its tree
/// path towards the root's leaf; every tree hop becomes a shortest graph path
/// between the clusters' representatives (the member closest to the root),
/// and the concatenation is shortcut to a simple path. An edge gets capacity
/// `max_i` of the number of `C_i` terminals whose path uses it.
pub fn frt_solve(inst: &Instance, seed: u64) -> Result<CapacityPlan, ApproxError> {
    let reach = component_of(inst, inst.root());
    if let Some(v) = (0..inst.node_count()).find(|v| !reach.contains(v)) {
        return Err(ApproxError::Disconnected(v));
    }
    let apsp = AllPairs::new(inst);
    let tree = embed_with(&apsp, seed);
    Ok(plan_from_tree(inst, &apsp, &tree))
}

/// Graph path from `t` to the root through the representatives of `t`'s
/// ancestors, with loops cut out.
fn terminal_path(inst: &Instance, apsp: &AllPairs, tree: &HstTree, t: NodeId) -> Vec<EdgeId> {
    let r = inst.root();
    let rep = |c: usize| {
        *tree.clusters[c]
            .members
            .iter()
            .min_by_key(|&&v| (apsp.dist(r, v), v))
            .expect("clusters are nonempty")
    };
    let mut stops = vec![t];
    let mut c = tree.leaf_of[t];
    loop {
        stops.push(rep(c));
        if tree.clusters[c].members.contains(&r) {
            break;
        }
        c = tree.clusters[c]
            .parent
            .expect("the top cluster holds the root");
    }
    stops.push(r);

    // Walk as (node, edge into it); revisiting a node drops the loop.
    let mut walk: Vec<(NodeId, Option<EdgeId>)> = vec![(t, None)];
    for hop in stops.windows(2) {
        let nodes = apsp.tree(hop[1]).path_nodes(hop[0]).expect("connected");
        let edges = apsp.tree(hop[1]).path_edges(hop[0]).expect("connected");
        for (&v, &e) in nodes.iter().skip(1).zip(&edges) {
            if let Some(pos) = walk.iter().position(|&(u, _)| u == v) {
                walk.truncate(pos + 1);
            } else {
                walk.push((v, Some(e)));
            }
        }
    }
    walk.into_iter().filter_map(|(_, e)| e).collect()
}

pub(crate) fn plan_from_tree(inst: &Instance, apsp: &AllPairs, tree: &HstTree) -> CapacityPlan {
    let mut caps = vec![0u64; inst.edge_count()];
    let mut paths: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    for color in inst.colors() {
        let mut load = vec![0u64; inst.edge_count()];
        for &t in color {
            let path = paths
                .entry(t)
                .or_insert_with(|| terminal_path(inst, apsp, tree, t));
            for &e in path.iter() {
                load[e] += 1;
            }
        }
        for (c, l) in caps.iter_mut().zip(load) {
            *c = (*c).max(l);
        }
    }
    CapacityPlan::Integral(caps)
}
