use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GenError;
use crate::model::{Edge, Instance, NodeId, Weight};

/// A connected random instance rooted at 0: a random spanning tree plus up to
/// `n` extra edges between non-adjacent pairs, integer weights drawn from
/// `weights`, and `k` colors of `color_size` random non-root nodes each.
pub fn gen_random(
    n: usize,
    k: usize,
    color_size: usize,
    seed: u64,
    weights: RangeInclusive<i64>,
) -> Result<Instance, GenError> {
    if n < 2 || k == 0 || color_size == 0 || color_size > n - 1 {
        return Err(GenError::RandomParams { n, k, color_size });
    }
    if *weights.start() < 0 || weights.is_empty() {
        return Err(GenError::WeightRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pairs = BTreeSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let (u, v) = (order[i], order[rng.gen_range(0..i)]);
        pairs.insert((u.min(v), u.max(v)));
        edges.push(Edge::new(
            u,
            v,
            Weight::from_integer(rng.gen_range(weights.clone())),
        ));
    }
    let free: Vec<(NodeId, NodeId)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !pairs.contains(p))
        .collect();
    let extra = rng.gen_range(0..=n.min(free.len()));
    for idx in sample(&mut rng, free.len(), extra) {
        let (u, v) = free[idx];
        edges.push(Edge::new(
            u,
            v,
            Weight::from_integer(rng.gen_range(weights.clone())),
        ));
    }
    let colors = (0..k)
        .map(|_| {
            let mut c: Vec<NodeId> = sample(&mut rng, n - 1, color_size)
                .into_iter()
                .map(|v| v + 1)
                .collect();
            c.sort();
            c
        })
        .collect();
    Ok(Instance::new(n, 0, edges, colors)?)
}
