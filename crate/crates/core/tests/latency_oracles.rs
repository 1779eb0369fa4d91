mod common;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sandkit::latency::{
    eulerify, greedy_cover_sequence, greedy_ladder, latency_exact, latency_round,
    latency_round_sampled, latency_solve_greedy, walk_cost, LatencyError, MAX_EXACT_TERMINALS,
};
use sandkit::{Instance, Weight};

use common::{random_instance, random_tree_instance};

fn level(inst: &Instance, visited: u32, terms: &[usize]) -> usize {
    let m = inst.max_color_size();
    inst.colors()
        .iter()
        .map(|c| {
            m - c.len()
                + c.iter()
                    .filter(|t| visited >> terms.iter().position(|x| x == *t).unwrap() & 1 == 1)
                    .count()
        })
        .min()
        .unwrap()
}

/// Optimal latency by Dijkstra over (node, visited terminal set): a step of
/// length `w` taken with `u` levels still uncovered costs `w·u`.
fn dijkstra_latency(inst: &Instance) -> Weight {
    let terms: Vec<usize> = inst.terminals().into_iter().collect();
    let m = inst.max_color_size();
    let bit = |v: usize| terms.iter().position(|&t| t == v).map_or(0, |i| 1u32 << i);
    let adj = inst.adjacency();
    let start = (inst.root(), bit(inst.root()));
    let mut dist: BTreeMap<(usize, u32), Weight> = BTreeMap::from([(start, Weight::zero())]);
    let mut heap = BinaryHeap::from([Reverse((Weight::zero(), start))]);
    while let Some(Reverse((d, (v, set)))) = heap.pop() {
        if dist.get(&(v, set)).is_some_and(|&best| best < d) {
            continue;
        }
        let covered = level(inst, set, &terms);
        if covered >= m {
            return d;
        }
        let factor = Weight::from_integer((m - covered) as i64);
        for &(e, u) in &adj[v] {
            let next = (u, set | bit(u));
            let nd = d + inst.edge(e).weight * factor;
            if dist.get(&next).is_none_or(|&old| nd < old) {
                dist.insert(next, nd);
                heap.push(Reverse((nd, next)));
            }
        }
    }
    unreachable!("connected instances are coverable")
}

#[test]
fn exact_matches_state_space_search() {
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=3);
        let inst = random_instance(10_000 + seed, n, k, 3, 1, 9);
        let exact = latency_exact(&inst).unwrap();
        assert_eq!(exact.cost, dijkstra_latency(&inst), "seed {seed}");
        assert_eq!(walk_cost(&inst, &exact.vertices).unwrap(), exact);
    }
}

#[test]
fn greedy_walks_are_valid_and_no_better_than_exact() {
    for seed in 0..120u64 {
        let inst = random_instance(11_000 + seed, 7, 2, 3, 1, 9);
        let greedy = latency_solve_greedy(&inst).unwrap();
        assert_eq!(walk_cost(&inst, &greedy.vertices).unwrap(), greedy);
        assert!(greedy.cost >= latency_exact(&inst).unwrap().cost);
        // t_j is nondecreasing.
        assert!(greedy.prefix_lengths.windows(2).all(|p| p[0] <= p[1]));
    }
}

#[test]
fn cover_sequence_is_nested_and_reaches_targets() {
    for seed in 0..80u64 {
        let inst = random_instance(12_000 + seed, 8, 3, 4, 1, 9);
        let m = inst.max_color_size();
        let seq = greedy_cover_sequence(&inst, m).unwrap();
        assert_eq!(seq.len(), m + 1);
        for (j, tree) in seq.iter().enumerate() {
            assert_eq!(tree.target, j);
            assert!(tree.level(&inst) >= j);
            let w = tree
                .edges
                .iter()
                .fold(Weight::zero(), |a, &e| a + inst.edge(e).weight);
            assert_eq!(w, tree.weight);
            if j > 0 {
                assert!(seq[j - 1].edges.is_subset(&tree.edges));
                let walk = eulerify(&inst, tree).unwrap();
                assert_eq!(walk.first(), Some(&inst.root()));
                assert_eq!(walk.last(), Some(&inst.root()));
                assert!(walk_cost(&inst, &walk).is_ok() || tree.level(&inst) < m);
            }
        }
    }
}

#[test]
fn eulerify_traverses_each_tree_edge_twice() {
    for seed in 0..100 {
        let inst = random_tree_instance(13_000 + seed, 2 + seed as usize % 12, 1, 3);
        let tree =
            sandkit::latency::CoverTree::from_edges(&inst, (0..inst.edge_count()).collect(), 0);
        let walk = eulerify(&inst, &tree).unwrap();
        let lw = walk_cost(&inst, &walk).unwrap();
        assert_eq!(lw.length(&inst), tree.weight * Weight::from_integer(2));
        assert_eq!(walk.len(), 2 * inst.edge_count() + 1);
    }
}

#[test]
fn ladder_scales_bound_tree_weights() {
    for seed in 0..60u64 {
        let inst = random_instance(14_000 + seed, 8, 2, 3, 1, 9);
        let ladder = greedy_ladder(&inst).unwrap();
        let mut last_target = 0;
        for (&scale, tree) in &ladder {
            assert!(scale.is_power_of_two());
            assert!(tree.weight <= Weight::from_integer(scale as i64));
            assert!(tree.target > last_target);
            last_target = tree.target;
        }
        assert_eq!(last_target, inst.max_color_size());
        let round = latency_round(&inst, &ladder).unwrap();
        for s in 0..5 {
            let samples: BTreeMap<u64, Vec<_>> =
                ladder.iter().map(|(&k, t)| (k, vec![t.clone()])).collect();
            let sampled = latency_round_sampled(&inst, &samples, Some(s)).unwrap();
            assert_eq!(sampled.cost, round.cost);
        }
    }
}

#[test]
fn exact_rejects_large_and_fractional_instances() {
    let big = sandkit::generators::gen_random(12, 1, 11, 1, 1..=3).unwrap();
    assert!(big.terminals().len() > MAX_EXACT_TERMINALS);
    assert!(matches!(
        latency_exact(&big),
        Err(LatencyError::TooLarge(_))
    ));
    let frac = Instance::new(
        2,
        0,
        vec![sandkit::Edge::new(0, 1, Weight::new(1, 2))],
        vec![vec![1]],
    )
    .unwrap();
    assert!(matches!(
        latency_exact(&frac),
        Err(LatencyError::NotIntegral)
    ));
    assert!(matches!(
        walk_cost(&frac, &[1, 0]),
        Err(LatencyError::NotIntegral) | Err(LatencyError::NotRooted)
    ));
}
