use std::collections::BTreeSet;

use num_traits::Zero;

use super::hungarian::min_cost_assignment;
use super::steiner::steiner_with;
use super::ApproxError;
use crate::model::{pad_colors, CapacityPlan, EdgeId, Instance, NodeId, Weight};
use crate::paths::{disconnected_terminal, AllPairs, ShortestPaths};

/// One matched green/blue pair. A side is `None` when it is a padding dummy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub green: Option<NodeId>,
    pub blue: Option<NodeId>,
    pub steiner_cost: Weight,
    /// Steiner edges, in the original instance's edge ids.
    pub edges: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingResult {
    pub pairs: Vec<Pair>,
    pub total_weight: Weight,
}

/// Two-color approximation: pair green and blue terminals by a minimum-weight
/// perfect matching under three-terminal Steiner costs, then install one unit
/// of capacity per pair on its Steiner tree.
pub fn matching_solve(inst: &Instance) -> Result<(CapacityPlan, PairingResult), ApproxError> {
    if let Some(t) = disconnected_terminal(inst) {
        return Err(ApproxError::Disconnected(t));
    }
    let padded = pad_colors(inst)?;
    let apsp = AllPairs::new(&padded);
    let greens = padded.color(0);
    let blues = padded.color(1);
    let mut trees = Vec::with_capacity(greens.len());
    for &g in greens {
        let row = blues
            .iter()
            .map(|&b| steiner_with(&padded, &apsp, g, b))
            .collect::<Result<Vec<_>, _>>()?;
        trees.push(row);
    }
    let costs: Vec<Vec<Weight>> = trees
        .iter()
        .map(|row| row.iter().map(|t| t.cost).collect())
        .collect();
    let (assignment, total_weight) = min_cost_assignment(&costs);

    let original = inst.edge_count();
    let mut caps = vec![0u64; original];
    let mut pairs = Vec::with_capacity(greens.len());
    for (i, &j) in assignment.iter().enumerate() {
        let tree = &trees[i][j];
        // Padding edges sit after the original ones and weigh nothing.
        let edges: BTreeSet<EdgeId> = tree
            .edges
            .iter()
            .copied()
            .filter(|&e| e < original)
            .collect();
        for &e in &edges {
            caps[e] += 1;
        }
        let side = |v: NodeId| (!padded.is_dummy(v)).then_some(v);
        pairs.push(Pair {
            green: side(greens[i]),
            blue: side(blues[j]),
            steiner_cost: tree.cost,
            edges,
        });
    }
    Ok((
        CapacityPlan::Integral(caps),
        PairingResult {
            pairs,
            total_weight,
        },
    ))
}

/// Routes every terminal along the shortest-path tree from the root; each
/// tree edge gets the largest per-color count of terminals below it.
pub fn shortest_path_solve(inst: &Instance) -> Result<CapacityPlan, ApproxError> {
    let tree = ShortestPaths::from(inst, inst.root());
    let mut caps = vec![0u64; inst.edge_count()];
    for color in inst.colors() {
        let mut load = vec![0u64; inst.edge_count()];
        for &t in color {
            let path = tree.path_edges(t).ok_or(ApproxError::Disconnected(t))?;
            for e in path {
                load[e] += 1;
            }
        }
        for (c, l) in caps.iter_mut().zip(load) {
            *c = (*c).max(l);
        }
    }
    Ok(CapacityPlan::Integral(caps))
}

/// `Σ_i Σ_{t ∈ C_i} d(t, r)`, an upper bound on the shortest-path plan cost.
pub fn shortest_path_bound(inst: &Instance) -> Option<Weight> {
    let tree = ShortestPaths::from(inst, inst.root());
    inst.colors()
        .iter()
        .flatten()
        .try_fold(Weight::zero(), |acc, &t| Some(acc + tree.dist[t]?))
}
