use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_traits::Zero;

use super::walk::Coverage;
use super::LatencyError;
use crate::model::{EdgeId, Instance, NodeId, Weight};

/// A tree through the root covering at least `target` terminals of every
/// color (with the same padding as [`super::walk_cost`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverTree {
    pub edges: BTreeSet<EdgeId>,
    pub target: usize,
    pub weight: Weight,
}

impl CoverTree {
    pub fn empty() -> Self {
        CoverTree {
            edges: BTreeSet::new(),
            target: 0,
            weight: Weight::zero(),
        }
    }

    pub fn from_edges(inst: &Instance, edges: BTreeSet<EdgeId>, target: usize) -> Self {
        let weight = edges
            .iter()
            .fold(Weight::zero(), |a, &e| a + inst.edge(e).weight);
        CoverTree {
            edges,
            target,
            weight,
        }
    }

    pub fn nodes(&self, inst: &Instance) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::from([inst.root()]);
        for &e in &self.edges {
            out.insert(inst.edge(e).u);
            out.insert(inst.edge(e).v);
        }
        out
    }

    /// Coverage level reached by the tree's nodes.
    pub fn level(&self, inst: &Instance) -> usize {
        let mut cov = Coverage::new(inst);
        for v in self.nodes(inst) {
            cov.visit(v);
        }
        cov.level()
    }
}

/// Closed depth-first walk around `tree` from the root, children in ascending
/// node id. Its length is exactly twice the tree weight.
pub fn eulerify(inst: &Instance, tree: &CoverTree) -> Result<Vec<NodeId>, LatencyError> {
    let root = inst.root();
    let mut adj: BTreeMap<NodeId, Vec<(NodeId, EdgeId)>> = BTreeMap::new();
    for &e in &tree.edges {
        let edge = inst.edge(e);
        adj.entry(edge.u).or_default().push((edge.v, e));
        adj.entry(edge.v).or_default().push((edge.u, e));
    }
    if !tree.edges.is_empty() && !adj.contains_key(&root) {
        return Err(LatencyError::TreeMissingRoot);
    }
    for list in adj.values_mut() {
        list.sort();
    }
    let mut walk = vec![root];
    let mut visited = BTreeSet::from([root]);
    let mut used = 0;
    // Iterative DFS: (node, next neighbor index).
    let mut stack = vec![(root, 0usize)];
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let neighbors = adj.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        if let Some(&(u, _)) = neighbors.get(*next) {
            *next += 1;
            if visited.insert(u) {
                used += 1;
                walk.push(u);
                stack.push((u, 0));
            }
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                walk.push(parent);
            }
        }
    }
    if used != tree.edges.len() {
        return Err(LatencyError::NotATree);
    }
    Ok(walk)
}

/// Multi-source Dijkstra from `sources`, settling in `(distance, id)` order.
/// Predecessors prefer the least `(node, edge)` pair.
fn grow_from(
    inst: &Instance,
    adj: &[Vec<(EdgeId, NodeId)>],
    sources: &BTreeSet<NodeId>,
) -> (Vec<Option<Weight>>, Vec<Option<(EdgeId, NodeId)>>) {
    let n = inst.node_count();
    let mut dist = vec![None; n];
    let mut pred = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = Some(Weight::zero());
        heap.push(Reverse((Weight::zero(), s)));
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v] || dist[v] != Some(d) {
            continue;
        }
        settled[v] = true;
        if !sources.contains(&v) {
            pred[v] = adj[v]
                .iter()
                .filter(|&&(e, u)| settled[u] && dist[u].unwrap() + inst.edge(e).weight == d)
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
    (dist, pred)
}

/// Greedy cover trees for targets `0..=upto`: entry `j` is the tree at the
/// moment every color first has `j` covered terminals. Each step picks the
/// deficient color with the fewest covered terminals (lowest index on ties)
/// and attaches the cheapest shortest path from the tree to one of its
/// uncovered terminals (lowest id on ties). The steps taken for target `j` are
/// a prefix of those for `j + 1`, so a single run yields every target.
pub fn greedy_cover_sequence(inst: &Instance, upto: usize) -> Result<Vec<CoverTree>, LatencyError> {
    let adj = inst.adjacency();
    let mut in_tree = BTreeSet::from([inst.root()]);
    let mut edges = BTreeSet::new();
    let mut cov = Coverage::new(inst);
    cov.visit(inst.root());
    let m = cov.target();
    if upto > m {
        return Err(LatencyError::Uncoverable {
            target: upto,
            available: m,
        });
    }
    let mut out = Vec::with_capacity(upto + 1);
    let mut counts: Vec<usize> = inst
        .colors()
        .iter()
        .map(|c| c.iter().filter(|t| in_tree.contains(t)).count())
        .collect();
    let padding: Vec<usize> = inst.colors().iter().map(|c| m - c.len()).collect();
    loop {
        while out.len() <= upto && out.len() <= cov.level() {
            out.push(CoverTree::from_edges(inst, edges.clone(), out.len()));
        }
        if out.len() > upto {
            return Ok(out);
        }
        let target = out.len();
        let color = (0..inst.color_count())
            .filter(|&i| counts[i] + padding[i] < target)
            .min_by_key(|&i| (counts[i] + padding[i], i))
            .expect("level below target implies a deficient color");
        let (dist, pred) = grow_from(inst, &adj, &in_tree);
        let Some(&t) = inst
            .color(color)
            .iter()
            .filter(|t| !in_tree.contains(t) && dist[**t].is_some())
            .min_by_key(|&&t| (dist[t], t))
        else {
            return Err(LatencyError::Uncoverable {
                target,
                available: counts[color] + padding[color],
            });
        };
        let mut v = t;
        while let Some((e, u)) = pred[v] {
            edges.insert(e);
            in_tree.insert(v);
            cov.visit(v);
            v = u;
        }
        in_tree.insert(t);
        cov.visit(t);
        for (i, c) in inst.colors().iter().enumerate() {
            counts[i] = c.iter().filter(|x| in_tree.contains(x)).count();
        }
    }
}

pub fn greedy_cover_tree(inst: &Instance, j: usize) -> Result<CoverTree, LatencyError> {
    Ok(greedy_cover_sequence(inst, j)?
        .pop()
        .expect("sequence has j + 1 entries"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_path;
    use crate::model::Edge;

    fn w(n: i64) -> Weight {
        Weight::from_integer(n)
    }

    #[test]
    fn star_walk() {
        let inst = Instance::new(
            3,
            0,
            vec![Edge::new(0, 1, w(1)), Edge::new(0, 2, w(1))],
            vec![vec![1, 2]],
        )
        .unwrap();
        let tree = CoverTree::from_edges(&inst, BTreeSet::from([0, 1]), 2);
        assert_eq!(eulerify(&inst, &tree).unwrap(), vec![0, 1, 0, 2, 0]);
    }

    #[test]
    fn single_edge_and_empty() {
        let inst = unit_path(vec![vec![1]]);
        let tree = CoverTree::from_edges(&inst, BTreeSet::from([0]), 1);
        assert_eq!(eulerify(&inst, &tree).unwrap(), vec![0, 1, 0]);
        assert_eq!(eulerify(&inst, &CoverTree::empty()).unwrap(), vec![0]);
    }

    #[test]
    fn tree_must_touch_root_and_be_acyclic() {
        let inst = unit_path(vec![vec![2]]);
        let tree = CoverTree::from_edges(&inst, BTreeSet::from([1]), 1);
        assert_eq!(eulerify(&inst, &tree), Err(LatencyError::TreeMissingRoot));
        let tri = Instance::new(
            3,
            0,
            vec![
                Edge::new(0, 1, w(1)),
                Edge::new(1, 2, w(1)),
                Edge::new(0, 2, w(1)),
            ],
            vec![vec![1]],
        )
        .unwrap();
        let cyc = CoverTree::from_edges(&tri, BTreeSet::from([0, 1, 2]), 1);
        assert_eq!(eulerify(&tri, &cyc), Err(LatencyError::NotATree));
    }

    #[test]
    fn greedy_forced_tree() {
        let inst = unit_path(vec![vec![1], vec![2]]);
        let t = greedy_cover_tree(&inst, 1).unwrap();
        assert_eq!(t.weight, w(2));
        assert_eq!(t.edges.len(), 2);
        assert_eq!(greedy_cover_tree(&inst, 0).unwrap(), CoverTree::empty());
    }

    #[test]
    fn greedy_sequence_is_nested() {
        let inst = unit_path(vec![vec![1, 2]]);
        let seq = greedy_cover_sequence(&inst, 2).unwrap();
        assert_eq!(
            seq.iter().map(|t| t.weight).collect::<Vec<_>>(),
            vec![w(0), w(1), w(2)]
        );
        assert!(seq[1].edges.is_subset(&seq[2].edges));
        assert!(matches!(
            greedy_cover_tree(&inst, 3),
            Err(LatencyError::Uncoverable { .. })
        ));
    }
}
