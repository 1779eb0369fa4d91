use std::collections::BTreeSet;

use num_traits::Zero;

use super::ApproxError;
use crate::model::{EdgeId, Instance, NodeId, Weight};
use crate::paths::AllPairs;

/// Minimum Steiner tree on `{a, b, root}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    pub cost: Weight,
    pub median: NodeId,
    pub edges: BTreeSet<EdgeId>,
}

pub fn three_terminal_steiner(
    inst: &Instance,
    a: NodeId,
    b: NodeId,
) -> Result<SteinerTree, ApproxError> {
    steiner_with(inst, &AllPairs::new(inst), a, b)
}

/// As [`three_terminal_steiner`], reusing precomputed shortest paths. The
/// median minimizes `d(a,m) + d(b,m) + d(r,m)`, ties to the lowest id.
pub fn steiner_with(
    inst: &Instance,
    apsp: &AllPairs,
    a: NodeId,
    b: NodeId,
) -> Result<SteinerTree, ApproxError> {
    let r = inst.root();
    for t in [a, b] {
        if apsp.dist(r, t).is_none() {
            return Err(ApproxError::Disconnected(t));
        }
    }
    let mut best: Option<(Weight, NodeId)> = None;
    for m in 0..inst.node_count() {
        let (Some(da), Some(db), Some(dr)) = (apsp.dist(m, a), apsp.dist(m, b), apsp.dist(m, r))
        else {
            continue;
        };
        let total = da + db + dr;
        if best.is_none_or(|(c, _)| total < c) {
            best = Some((total, m));
        }
    }
    let (_, median) = best.expect("root component is nonempty");
    let tree = apsp.tree(median);
    let mut edges = BTreeSet::new();
    for t in [a, b, r] {
        edges.extend(tree.path_edges(t).expect("reachable"));
    }
    let cost = edges
        .iter()
        .fold(Weight::zero(), |acc, &e| acc + inst.edge(e).weight);
    Ok(SteinerTree {
        cost,
        median,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{i2, triangle_gb, I2_B, I2_G, I2_V};

    #[test]
    fn degenerate_at_root() {
        let inst = i2();
        let t = three_terminal_steiner(&inst, 0, 0).unwrap();
        assert_eq!(t.cost, Weight::zero());
        assert!(t.edges.is_empty());
    }

    #[test]
    fn i2_median() {
        let t = three_terminal_steiner(&i2(), I2_G, I2_B).unwrap();
        assert_eq!(t.cost, Weight::from_integer(12));
        assert_eq!(t.median, I2_V);
        assert_eq!(t.edges.len(), 3);
    }

    #[test]
    fn triangle_median_ties_to_lowest() {
        // Medians g and b both give 4.
        let t = three_terminal_steiner(&triangle_gb(), 1, 2).unwrap();
        assert_eq!(t.cost, Weight::from_integer(4));
        assert_eq!(t.median, 1);
        assert_eq!(t.edges, BTreeSet::from([0, 2]));
    }

    #[test]
    fn coinciding_terminals() {
        let t = three_terminal_steiner(&i2(), I2_G, I2_G).unwrap();
        assert_eq!(t.cost, Weight::from_integer(11));
    }
}
