use super::walk::{walk_cost, Coverage, LatencyWalk};
use super::{require_integral, LatencyError};
use crate::model::{Instance, NodeId, Weight};
use crate::paths::{disconnected_terminal, AllPairs};

pub const MAX_EXACT_TERMINALS: usize = 9;

/// Optimal walk over terminal visit orders in the shortest-path closure.
///
/// Dynamic program over (visited terminals, last terminal): a leg of length
/// `d` taken while `c` levels are still uncovered adds `d·c` to the cost.
pub fn latency_exact(inst: &Instance) -> Result<LatencyWalk, LatencyError> {
    require_integral(inst)?;
    if let Some(t) = disconnected_terminal(inst) {
        return Err(LatencyError::Disconnected(t));
    }
    let terms: Vec<NodeId> = inst.terminals().into_iter().collect();
    let k = terms.len();
    if k > MAX_EXACT_TERMINALS {
        return Err(LatencyError::TooLarge(k));
    }
    let apsp = AllPairs::new(inst);
    let m = inst.max_color_size();
    let level = |mask: usize| {
        let mut cov = Coverage::new(inst);
        for (i, &t) in terms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                cov.visit(t);
            }
        }
        cov.level()
    };
    let levels: Vec<usize> = (0..1usize << k).map(level).collect();
    let d = |a: NodeId, b: NodeId| apsp.dist(a, b).expect("connected");

    // best[mask][last]: (cost, predecessor last index or k for the root).
    let mut best: Vec<Vec<Option<(Weight, usize)>>> = vec![vec![None; k]; 1 << k];
    for (i, &t) in terms.iter().enumerate() {
        let c = d(inst.root(), t) * Weight::from_integer((m - levels[0]) as i64);
        best[1 << i][i] = Some((c, k));
    }
    let mut answer: Option<(Weight, usize, usize)> = None;
    for mask in 1..1usize << k {
        for last in 0..k {
            let Some((c, _)) = best[mask][last] else {
                continue;
            };
            if levels[mask] >= m {
                if answer.is_none_or(|(a, _, _)| c < a) {
                    answer = Some((c, mask, last));
                }
                continue;
            }
            let remaining = Weight::from_integer((m - levels[mask]) as i64);
            for next in 0..k {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let nc = c + d(terms[last], terms[next]) * remaining;
                let slot = &mut best[mask | (1 << next)][next];
                if slot.is_none_or(|(old, _)| nc < old) {
                    *slot = Some((nc, last));
                }
            }
        }
    }
    let (_, mut mask, mut last) = answer.ok_or(LatencyError::Incomplete {
        reached: levels[(1 << k) - 1],
        needed: m,
    })?;
    let mut order = Vec::new();
    loop {
        order.push(terms[last]);
        let (_, prev) = best[mask][last].expect("reconstructed state exists");
        mask &= !(1 << last);
        if prev == k {
            break;
        }
        last = prev;
    }
    order.reverse();

    let mut walk = vec![inst.root()];
    for &t in &order {
        let from = *walk.last().unwrap();
        let leg = apsp.tree(t).path_nodes(from).expect("connected");
        walk.extend_from_slice(&leg[1..]);
    }
    walk_cost(inst, &walk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::unit_path;
    use crate::model::Edge;

    #[test]
    fn path_one_color() {
        let inst = unit_path(vec![vec![1, 2]]);
        let lw = latency_exact(&inst).unwrap();
        assert_eq!(lw.vertices, vec![0, 1, 2]);
        assert_eq!(lw.cost, Weight::from_integer(3));
    }

    #[test]
    fn star_single_terminal() {
        let inst = Instance::new(
            3,
            0,
            vec![
                Edge::new(0, 1, Weight::from_integer(4)),
                Edge::new(0, 2, Weight::from_integer(1)),
            ],
            vec![vec![1]],
        )
        .unwrap();
        assert_eq!(latency_exact(&inst).unwrap().cost, Weight::from_integer(4));
    }

    #[test]
    fn rejects_fractional_weights() {
        let inst = Instance::new(
            2,
            0,
            vec![Edge::new(0, 1, Weight::new(1, 2))],
            vec![vec![1]],
        )
        .unwrap();
        assert_eq!(latency_exact(&inst), Err(LatencyError::NotIntegral));
    }
}
