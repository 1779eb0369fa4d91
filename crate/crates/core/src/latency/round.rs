use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cover::{eulerify, greedy_cover_sequence, CoverTree};
use super::walk::{walk_cost, LatencyWalk};
use super::{require_integral, LatencyError};
use crate::model::{Instance, Weight};
use crate::paths::disconnected_terminal;

/// Concatenates the eulerified trees in increasing scale order. Each tree
/// must weigh at most its scale and the last one must cover every level.
pub fn latency_round(
    inst: &Instance,
    trees: &BTreeMap<u64, CoverTree>,
) -> Result<LatencyWalk, LatencyError> {
    let candidates: BTreeMap<u64, Vec<CoverTree>> = trees
        .iter()
        .map(|(&t, tree)| (t, vec![tree.clone()]))
        .collect();
    latency_round_sampled(inst, &candidates, None)
}

/// As [`latency_round`] with several candidate trees per scale. Without a
/// seed the first candidate is used; with one, a candidate is drawn uniformly
/// per scale. The final scale's candidates must all cover every level.
pub fn latency_round_sampled(
    inst: &Instance,
    candidates: &BTreeMap<u64, Vec<CoverTree>>,
    seed: Option<u64>,
) -> Result<LatencyWalk, LatencyError> {
    require_integral(inst)?;
    let m = inst.max_color_size();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut walk = vec![inst.root()];
    let last_scale = candidates.keys().next_back().copied();
    for (&scale, options) in candidates {
        for tree in options {
            if tree.weight > Weight::from_integer(scale as i64) {
                return Err(LatencyError::TreeOverScale {
                    scale,
                    weight: tree.weight,
                });
            }
            if Some(scale) == last_scale && tree.level(inst) < m {
                return Err(LatencyError::FinalTreeIncomplete);
            }
        }
        let pick = match (&mut rng, options.len()) {
            (_, 0) => continue,
            (Some(rng), n) => rng.gen_range(0..n),
            (None, _) => 0,
        };
        let tour = eulerify(inst, &options[pick])?;
        walk.extend_from_slice(&tour[1..]);
    }
    if last_scale.is_none() {
        return Err(LatencyError::FinalTreeIncomplete);
    }
    walk_cost(inst, &walk)
}

/// Greedy ladder: at scale `2^i` take the greedy tree for the largest target
/// whose weight fits, for `i` up to the first scale holding a full cover.
/// Scales that add no new level are skipped.
pub fn greedy_ladder(inst: &Instance) -> Result<BTreeMap<u64, CoverTree>, LatencyError> {
    require_integral(inst)?;
    if let Some(t) = disconnected_terminal(inst) {
        return Err(LatencyError::Disconnected(t));
    }
    let m = inst.max_color_size();
    let seq = greedy_cover_sequence(inst, m)?;
    let full = seq[m].weight.to_integer().max(0) as u64;
    let mut ladder = BTreeMap::new();
    let mut scale = 1u64;
    let mut last_target = 0;
    loop {
        let fits = seq.partition_point(|t| t.weight <= Weight::from_integer(scale as i64));
        let target = fits - 1;
        if target > last_target || (target == m && ladder.is_empty()) {
            ladder.insert(scale, seq[target].clone());
            last_target = target;
        }
        if scale >= full {
            break;
        }
        scale *= 2;
    }
    Ok(ladder)
}

pub fn latency_solve_greedy(inst: &Instance) -> Result<LatencyWalk, LatencyError> {
    latency_round(inst, &greedy_ladder(inst)?)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::fixtures::unit_path;

    fn w(n: i64) -> Weight {
        Weight::from_integer(n)
    }

    #[test]
    fn two_scale_round() {
        let inst = unit_path(vec![vec![1, 2]]);
        let trees = BTreeMap::from([
            (1, CoverTree::from_edges(&inst, BTreeSet::from([0]), 1)),
            (2, CoverTree::from_edges(&inst, BTreeSet::from([0, 1]), 2)),
        ]);
        let lw = latency_round(&inst, &trees).unwrap();
        assert_eq!(lw.vertices, vec![0, 1, 0, 1, 2, 1, 0]);
        assert_eq!(lw.prefix_lengths, vec![w(1), w(4)]);
        assert_eq!(lw.cost, w(5));
    }

    #[test]
    fn round_validation() {
        let inst = unit_path(vec![vec![1, 2]]);
        let heavy = BTreeMap::from([(1, CoverTree::from_edges(&inst, BTreeSet::from([0, 1]), 2))]);
        assert!(matches!(
            latency_round(&inst, &heavy),
            Err(LatencyError::TreeOverScale { .. })
        ));
        let partial = BTreeMap::from([(1, CoverTree::from_edges(&inst, BTreeSet::from([0]), 1))]);
        assert_eq!(
            latency_round(&inst, &partial),
            Err(LatencyError::FinalTreeIncomplete)
        );
    }

    #[test]
    fn greedy_on_path() {
        let inst = unit_path(vec![vec![1, 2]]);
        let ladder = greedy_ladder(&inst).unwrap();
        assert_eq!(ladder.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        let lw = latency_solve_greedy(&inst).unwrap();
        assert_eq!(lw.cost, w(5));
    }

    #[test]
    fn sampled_round_is_reproducible() {
        let inst = unit_path(vec![vec![1, 2]]);
        let full = CoverTree::from_edges(&inst, BTreeSet::from([0, 1]), 2);
        let cands = BTreeMap::from([
            (
                1,
                vec![
                    CoverTree::empty(),
                    CoverTree::from_edges(&inst, BTreeSet::from([0]), 1),
                ],
            ),
            (2, vec![full]),
        ]);
        let a = latency_round_sampled(&inst, &cands, Some(9)).unwrap();
        let b = latency_round_sampled(&inst, &cands, Some(9)).unwrap();
        assert_eq!(a, b);
    }
}
