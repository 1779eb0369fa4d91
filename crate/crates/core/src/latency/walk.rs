use num_traits::Zero;

use super::LatencyError;
use crate::model::{Instance, NodeId, Weight};

/// A root-anchored walk with its prefix-cover lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyWalk {
    pub vertices: Vec<NodeId>,
    /// `t_j`: walk length at the first point where every color has at least
    /// `j` visited terminals, for `j = 1..=m`.
    pub prefix_lengths: Vec<Weight>,
    pub cost: Weight,
}

impl LatencyWalk {
    pub fn length(&self, inst: &Instance) -> Weight {
        self.vertices
            .windows(2)
            .map(|p| step_length(inst, p[0], p[1]).unwrap_or_else(Weight::zero))
            .fold(Weight::zero(), |a, b| a + b)
    }
}

/// Cheapest edge between two nodes, if any.
pub(crate) fn step_length(inst: &Instance, u: NodeId, v: NodeId) -> Option<Weight> {
    inst.edges()
        .iter()
        .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
        .map(|e| e.weight)
        .min()
}

/// Number of coverage levels reached: colors smaller than the largest one
/// count their missing terminals as already covered.
pub(crate) struct Coverage<'a> {
    inst: &'a Instance,
    m: usize,
    counts: Vec<usize>,
    seen: Vec<bool>,
}

impl<'a> Coverage<'a> {
    pub(crate) fn new(inst: &'a Instance) -> Self {
        let m = inst.max_color_size();
        Coverage {
            inst,
            m,
            counts: inst.colors().iter().map(|c| m - c.len()).collect(),
            seen: vec![false; inst.node_count()],
        }
    }

    pub(crate) fn visit(&mut self, v: NodeId) {
        if std::mem::replace(&mut self.seen[v], true) {
            return;
        }
        for (i, color) in self.inst.colors().iter().enumerate() {
            if color.binary_search(&v).is_ok() {
                self.counts[i] += 1;
            }
        }
    }

    pub(crate) fn level(&self) -> usize {
        self.counts.iter().copied().min().unwrap_or(self.m)
    }

    pub(crate) fn target(&self) -> usize {
        self.m
    }
}

/// Evaluates a walk: `cost = Σ_j t_j`. The walk must start at the root and
/// eventually cover every level.
pub fn walk_cost(inst: &Instance, walk: &[NodeId]) -> Result<LatencyWalk, LatencyError> {
    if walk.first() != Some(&inst.root()) {
        return Err(LatencyError::NotRooted);
    }
    if let Some(&v) = walk.iter().find(|&&v| v >= inst.node_count()) {
        return Err(LatencyError::UnknownNode(v));
    }
    let mut cov = Coverage::new(inst);
    let m = cov.target();
    let mut prefix = Vec::with_capacity(m);
    let mut length = Weight::zero();
    let record = |cov: &Coverage, length: Weight, prefix: &mut Vec<Weight>| {
        while prefix.len() < cov.level() {
            prefix.push(length);
        }
    };
    cov.visit(walk[0]);
    record(&cov, length, &mut prefix);
    for pair in walk.windows(2) {
        let step = step_length(inst, pair[0], pair[1])
            .ok_or(LatencyError::NotAdjacent(pair[0], pair[1]))?;
        length += step;
        cov.visit(pair[1]);
        record(&cov, length, &mut prefix);
    }
    if prefix.len() < m {
        return Err(LatencyError::Incomplete {
            reached: prefix.len(),
            needed: m,
        });
    }
    let cost = prefix.iter().fold(Weight::zero(), |a, &b| a + b);
    Ok(LatencyWalk {
        vertices: walk.to_vec(),
        prefix_lengths: prefix,
        cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_path;

    fn w(n: i64) -> Weight {
        Weight::from_integer(n)
    }

    #[test]
    fn one_color_path() {
        let inst = unit_path(vec![vec![1, 2]]);
        let lw = walk_cost(&inst, &[0, 1, 2]).unwrap();
        assert_eq!(lw.prefix_lengths, vec![w(1), w(2)]);
        assert_eq!(lw.cost, w(3));
    }

    #[test]
    fn two_singleton_colors() {
        let inst = unit_path(vec![vec![1], vec![2]]);
        let lw = walk_cost(&inst, &[0, 1, 2]).unwrap();
        assert_eq!(lw.prefix_lengths, vec![w(2)]);
        assert_eq!(lw.cost, w(2));
    }

    #[test]
    fn unequal_colors_are_padded() {
        // Color sizes 2 and 1: the small color counts as one level ahead.
        let inst = unit_path(vec![vec![1, 2], vec![1]]);
        let lw = walk_cost(&inst, &[0, 1, 2]).unwrap();
        assert_eq!(lw.prefix_lengths, vec![w(1), w(2)]);
    }

    #[test]
    fn errors() {
        let inst = unit_path(vec![vec![1, 2]]);
        assert_eq!(walk_cost(&inst, &[1, 2]), Err(LatencyError::NotRooted));
        assert_eq!(walk_cost(&inst, &[]), Err(LatencyError::NotRooted));
        assert_eq!(
            walk_cost(&inst, &[0, 2]),
            Err(LatencyError::NotAdjacent(0, 2))
        );
        assert_eq!(
            walk_cost(&inst, &[0, 1, 0]),
            Err(LatencyError::Incomplete {
                reached: 1,
                needed: 2
            })
        );
    }

    #[test]
    fn revisits_allowed() {
        let inst = unit_path(vec![vec![1, 2]]);
        let lw = walk_cost(&inst, &[0, 1, 0, 1, 2]).unwrap();
        assert_eq!(lw.prefix_lengths, vec![w(1), w(4)]);
        assert_eq!(lw.length(&inst), w(4));
    }
}
