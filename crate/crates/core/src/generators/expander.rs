use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GenError;
use crate::model::{CapacityPlan, Edge, Instance, NodeId, Weight};

const PICK_ATTEMPTS: usize = 64;
const MAX_RESTARTS: usize = 10_000;

/// Random simple `d`-regular graph on `0..n` by the pairing model, pairing
/// points one suitable pair at a time (distinct vertices, no repeated edge)
/// and restarting when no suitable pair is left.
pub fn random_regular(
    n: usize,
    d: usize,
    rng: &mut impl Rng,
) -> Result<BTreeSet<(usize, usize)>, GenError> {
    if n * d % 2 == 1 {
        return Err(GenError::OddDegreeSum { n, d });
    }
    if d >= n && n > 0 && d > 0 {
        return Err(GenError::DegreeTooLarge { n, d });
    }
    'restart: for _ in 0..MAX_RESTARTS {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut edges = BTreeSet::new();
        while !points.is_empty() {
            let suitable = |a: usize, b: usize, edges: &BTreeSet<(usize, usize)>| {
                let (u, v) = (points[a].min(points[b]), points[a].max(points[b]));
                u != v && !edges.contains(&(u, v))
            };
            let mut chosen = None;
            for _ in 0..PICK_ATTEMPTS {
                let a = rng.gen_range(0..points.len());
                let b = rng.gen_range(0..points.len());
                if a != b && suitable(a, b, &edges) {
                    chosen = Some((a, b));
                    break;
                }
            }
            if chosen.is_none() {
                let all: Vec<(usize, usize)> = (0..points.len())
                    .flat_map(|a| (a + 1..points.len()).map(move |b| (a, b)))
                    .filter(|&(a, b)| suitable(a, b, &edges))
                    .collect();
                if all.is_empty() {
                    continue 'restart;
                }
                chosen = Some(all[rng.gen_range(0..all.len())]);
            }
            let (a, b) = chosen.unwrap();
            let (u, v) = (points[a].min(points[b]), points[a].max(points[b]));
            edges.insert((u, v));
            let (hi, lo) = (a.max(b), a.min(b));
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return Ok(edges);
    }
    Err(GenError::RegularGraph { n, d })
}

/// A random `d`-regular graph on nodes `1..=n` plus a root 0 joined to every
/// node with weight `n/b`; graph edges weigh 1. Colors are
/// `num_colors` uniformly sampled `b`-subsets. The reference plan uses every
/// graph edge and the `b` lowest-id root edges once, costing `nd/2 + n`.
pub fn gen_expander(
    n: usize,
    d: usize,
    b: usize,
    num_colors: usize,
    seed: u64,
) -> Result<(Instance, CapacityPlan), GenError> {
    if b == 0 || b > n {
        return Err(GenError::BadColorSize { size: b, nodes: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_regular(n, d, &mut rng)?;
    let root_weight = Weight::new(n as i64, b as i64);
    let mut edges: Vec<Edge> = (1..=n).map(|v| Edge::new(0, v, root_weight)).collect();
    edges.extend(
        graph
            .iter()
            .map(|&(u, v)| Edge::new(u + 1, v + 1, Weight::from_integer(1))),
    );
    let colors: Vec<Vec<NodeId>> = (0..num_colors)
        .map(|_| {
            let mut c: Vec<NodeId> = sample(&mut rng, n, b).into_iter().map(|v| v + 1).collect();
            c.sort();
            c
        })
        .collect();
    let caps = (0..edges.len())
        .map(|e| u64::from(e < b || e >= n))
        .collect();
    let inst = Instance::new(n + 1, 0, edges, colors)?;
    Ok((inst, CapacityPlan::Integral(caps)))
}
