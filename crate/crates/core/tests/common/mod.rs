#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sandkit::generators::{gen_random, CnfFormula, Literal};
use sandkit::{CapacityPlan, Instance, NodeId};

/// Random connected instance with per-color sizes drawn from `1..=max_size`
/// (capped at `n - 1`), integer weights in `lo..=hi`.
pub fn random_instance(
    seed: u64,
    n: usize,
    k: usize,
    max_size: usize,
    lo: i64,
    hi: i64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let cap = max_size.min(n - 1);
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=cap)).collect();
    let base = gen_random(n, k, *sizes.iter().max().unwrap(), seed, lo..=hi).unwrap();
    let colors: Vec<Vec<NodeId>> = base
        .colors()
        .iter()
        .zip(&sizes)
        .map(|(c, &s)| c[..s].to_vec())
        .collect();
    Instance::new(n, base.root(), base.edges().to_vec(), colors).unwrap()
}

/// Every nonempty node set avoiding the root.
pub fn root_free_subsets(inst: &Instance) -> Vec<BTreeSet<NodeId>> {
    let others: Vec<NodeId> = (0..inst.node_count())
        .filter(|&v| v != inst.root())
        .collect();
    (1u32..1 << others.len())
        .map(|mask| {
            (0..others.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| others[i])
                .collect()
        })
        .collect()
}

/// Exhaustive check of every cut constraint, with slack `tol`.
pub fn violated_subsets(inst: &Instance, plan: &CapacityPlan, tol: f64) -> Vec<BTreeSet<NodeId>> {
    root_free_subsets(inst)
        .into_iter()
        .filter(|s| {
            let lhs: f64 = inst.boundary(s).into_iter().map(|e| plan.value(e)).sum();
            lhs < inst.requirement(s) as f64 - tol
        })
        .collect()
}

/// Random formula where every variable occurs three times, exactly once
/// negated, with no variable repeated inside a clause.
pub fn random_normal_formula(rng: &mut ChaCha8Rng, p: usize) -> CnfFormula {
    loop {
        let mut occ: Vec<Literal> = (0..p)
            .flat_map(|v| [Literal::pos(v), Literal::pos(v), Literal::neg(v)])
            .collect();
        occ.shuffle(rng);
        let m = rng.gen_range(p.max(3)..=3 * p);
        // Cut the shuffled occurrences into m nonempty clauses.
        let mut cuts: Vec<usize> = rand::seq::index::sample(rng, occ.len() - 1, m - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort();
        let mut clauses = Vec::new();
        let mut start = 0;
        for c in cuts.into_iter().chain([occ.len()]) {
            clauses.push(occ[start..c].to_vec());
            start = c;
        }
        let valid = clauses.iter().all(|c| {
            let vars: BTreeSet<usize> = c.iter().map(|l| l.var).collect();
            vars.len() == c.len()
        });
        if valid {
            return CnfFormula {
                variable_count: p,
                clauses,
            };
        }
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Random tree on `n` nodes rooted at 0, weights in `1..=9`, `k` colors of
/// random sizes up to `max_size`.
pub fn random_tree_instance(seed: u64, n: usize, k: usize, max_size: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..n)
        .map(|v| {
            sandkit::Edge::new(
                rng.gen_range(0..v),
                v,
                sandkit::Weight::from_integer(rng.gen_range(1..=9)),
            )
        })
        .collect();
    let colors = (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n - 1));
            let mut c: Vec<NodeId> = rand::seq::index::sample(&mut rng, n - 1, size)
                .into_iter()
                .map(|v| v + 1)
                .collect();
            c.sort();
            c
        })
        .collect();
    Instance::new(n, 0, edges, colors).unwrap()
}

/// Minimum weight of an edge subset connecting all of `terminals`, by
/// enumerating every subset. Only for tiny edge counts.
pub fn brute_force_steiner(inst: &Instance, terminals: &[NodeId]) -> Option<sandkit::Weight> {
    let m = inst.edge_count();
    assert!(m <= 16);
    let mut best: Option<sandkit::Weight> = None;
    for mask in 0u32..1 << m {
        let mut ds = sandkit::paths::DisjointSets::new(inst.node_count());
        let mut w = sandkit::Weight::from_integer(0);
        for e in 0..m {
            if mask >> e & 1 == 1 {
                ds.union(inst.edge(e).u, inst.edge(e).v);
                w += inst.edge(e).weight;
            }
        }
        let root = ds.find(terminals[0]);
        if terminals.iter().all(|&t| ds.find(t) == root) && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
    }
    best
}
