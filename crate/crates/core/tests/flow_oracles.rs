mod common;

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sandkit::approx::shortest_path_solve;
use sandkit::flow::{
    check_feasible, extract_routing, max_flow, split_report, FlowProblem, SplitKind, SplitVertex,
};
use sandkit::lp::solve_exact;
use sandkit::model::{expand_parallel, plan_cost};
use sandkit::paths::AllPairs;
use sandkit::{CapacityPlan, Instance, Weight};

use common::{random_instance, violated_subsets};

/// Minimum over all source-side node sets of the capacity leaving them, with
/// supplies counted as arcs from an outside super-source.
fn min_cut_by_enumeration(p: &FlowProblem<i64>) -> i64 {
    let n = p.node_count;
    (0u32..1 << n)
        .filter(|m| m >> p.sink & 1 == 0)
        .map(|mask| {
            let inside = |v: usize| mask >> v & 1 == 1;
            let arcs: i64 = p
                .arcs
                .iter()
                .filter(|&&(u, v, _)| inside(u) && !inside(v))
                .map(|a| a.2)
                .sum();
            let supplies: i64 = p
                .sources
                .iter()
                .filter(|&&(v, _)| !inside(v))
                .map(|s| s.1)
                .sum();
            arcs + supplies
        })
        .min()
        .unwrap()
}

#[test]
fn max_flow_equals_enumerated_min_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let sink = rng.gen_range(0..n);
        let arc_count = rng.gen_range(0..=3 * n);
        let arcs: Vec<(usize, usize, i64)> = (0..arc_count)
            .map(|_| {
                (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..=4),
                )
            })
            .filter(|a| a.0 != a.1)
            .collect();
        let mut sources = Vec::new();
        for v in (0..n).filter(|&v| v != sink) {
            if rng.gen_bool(0.5) {
                sources.push((v, rng.gen_range(1..=3i64)));
            }
        }
        let p = FlowProblem {
            node_count: n,
            arcs,
            sources,
            sink,
        };
        let res = max_flow(&p);
        assert_eq!(res.value, min_cut_by_enumeration(&p));
        // Flow conservation and capacity on the reported arc flows.
        let mut net = vec![0i64; n];
        for (&(u, v, c), &f) in p.arcs.iter().zip(&res.arc_flows) {
            assert!((0..=c).contains(&f));
            net[u] -= f;
            net[v] += f;
        }
        for v in 0..n {
            if v != sink {
                let supply: i64 = p.sources.iter().filter(|s| s.0 == v).map(|s| s.1).sum();
                assert!(net[v] <= 0 && -net[v] <= supply);
            }
        }
        assert!(!res.min_cut.contains(&sink));
    }
}

#[test]
fn feasibility_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut infeasible = 0;
    for seed in 0..150 {
        let n = rng.gen_range(2..=8);
        let inst = random_instance(seed, n, rng.gen_range(1..=3), 4, 1, 5);
        let plan = CapacityPlan::Integral(
            (0..inst.edge_count())
                .map(|_| rng.gen_range(0..=2))
                .collect(),
        );
        let verdict = check_feasible(&inst, &plan).unwrap();
        let brute = violated_subsets(&inst, &plan, 0.0);
        assert_eq!(verdict.is_feasible(), brute.is_empty(), "seed {seed}");
        if let sandkit::flow::Feasibility::Violation(cut) = verdict {
            infeasible += 1;
            assert!(cut.lhs(&inst, &plan) < cut.rhs as f64);
            assert!(!cut.node_set.contains(&inst.root()));
            assert_eq!(cut.rhs, inst.requirement(&cut.node_set));
        }
    }
    assert!(infeasible > 10);
}

#[test]
fn extracted_routings_respect_plans() {
    for seed in 0..100 {
        let inst = random_instance(100 + seed, 7, 3, 4, 1, 9);
        let plan = shortest_path_solve(&inst).unwrap();
        let routing = extract_routing(&inst, &plan).unwrap();
        routing.validate(&inst, Some(&plan)).unwrap();
        for (i, color) in inst.colors().iter().enumerate() {
            let terminals: BTreeSet<usize> = routing.colors[i].keys().copied().collect();
            assert_eq!(terminals, color.iter().copied().collect());
            for w in routing.colors[i].values() {
                let nodes = w.nodes(&inst);
                let distinct: BTreeSet<_> = nodes.iter().collect();
                assert_eq!(distinct.len(), nodes.len(), "walks are cycle-free");
            }
        }
    }
}

/// Unit copies of each edge up to its capacity.
fn unit_plan(inst: &Instance, plan: &CapacityPlan) -> (Instance, CapacityPlan, Vec<usize>) {
    let expansion = expand_parallel(inst);
    let mut used = vec![0u64; inst.edge_count()];
    let caps = expansion
        .origin
        .iter()
        .map(|&e| {
            used[e] += 1;
            u64::from(used[e] <= plan.value(e) as u64)
        })
        .collect();
    (
        expansion.instance.clone(),
        CapacityPlan::Integral(caps),
        expansion.origin,
    )
}

#[test]
fn expansion_aggregates_to_equal_cost_feasible_plans() {
    for seed in 0..50 {
        let inst = random_instance(300 + seed, 6, 2, 3, 1, 9);
        let plan = shortest_path_solve(&inst).unwrap();
        let expansion = expand_parallel(&inst);
        assert_eq!(
            expansion.instance.edge_count(),
            inst.edge_count() * inst.max_color_size()
        );
        let (big, unit, _) = unit_plan(&inst, &plan);
        assert!(check_feasible(&big, &unit).unwrap().is_feasible());
        let back = expansion.aggregate(&unit, inst.edge_count());
        assert!(check_feasible(&inst, &back).unwrap().is_feasible());
        assert_eq!(
            plan_cost(&big, &unit).unwrap(),
            plan_cost(&inst, &back).unwrap()
        );
    }
}

#[test]
fn expansion_preserves_optimum() {
    for seed in 0..25 {
        let inst = random_instance(400 + seed, 5, 2, 2, 1, 9);
        let a = solve_exact(&inst, 100_000).unwrap().optimum;
        let b = solve_exact(&expand_parallel(&inst).instance, 100_000)
            .unwrap()
            .optimum;
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn split_weights_sum_to_used_weight() {
    let mut with_splits = 0;
    for seed in 0..100 {
        let inst = random_instance(600 + seed, 8, 2, 3, 1, 9);
        let plan = shortest_path_solve(&inst).unwrap();
        let (big, unit, _) = unit_plan(&inst, &plan);
        let routing = extract_routing(&big, &unit).unwrap();
        let report = split_report(&big, &routing).unwrap();
        let used: BTreeSet<usize> = routing
            .colors
            .iter()
            .flat_map(|c| c.values())
            .flat_map(|w| w.steps.iter().map(|s| s.edge))
            .collect();
        let total = used
            .iter()
            .fold(Weight::zero(), |a, &e| a + big.edge(e).weight);
        assert_eq!(report.weights.total(), total, "seed {seed}");
        with_splits += usize::from(!report.splits.is_empty());
    }
    assert!(with_splits > 20);
}

#[test]
fn split_structure_of_exact_solutions() {
    let mut unresolved = 0;
    let mut degree_breaks = 0;
    for seed in 0..60 {
        let inst = random_instance(800 + seed, 6, 2, 2, 1, 9);
        let plan = solve_exact(&inst, 100_000).unwrap().plan;
        let (big, unit, _) = unit_plan(&inst, &plan);
        let routing = extract_routing(&big, &unit).unwrap();
        let report = split_report(&big, &routing).unwrap();
        degree_breaks += usize::from(!report.degree_violations().is_empty());
        // Alternating paths are arc-disjoint and no terminal ends two of them.
        let mut arcs: Vec<usize> = report
            .alternating_paths
            .iter()
            .flat_map(|p| p.arcs.iter().copied())
            .collect();
        let n_arcs = arcs.len();
        arcs.sort();
        arcs.dedup();
        assert_eq!(arcs.len(), n_arcs, "seed {seed}");
        let mut ends: Vec<SplitVertex> = report
            .alternating_paths
            .iter()
            .flat_map(|p| [p.vertices[0], *p.vertices.last().unwrap()])
            .collect();
        let n_ends = ends.len();
        ends.sort();
        ends.dedup();
        assert_eq!(ends.len(), n_ends, "seed {seed}");
        let sharing: BTreeSet<SplitVertex> = report
            .split_graph
            .arcs
            .iter()
            .map(|a| a.from)
            .filter(|v| matches!(v, SplitVertex::Terminal { .. }))
            .collect();
        for t in &sharing {
            let SplitVertex::Terminal { node, .. } = *t else {
                unreachable!()
            };
            assert!(
                ends.contains(t) || report.unresolved.contains(&node),
                "seed {seed}: {t:?}"
            );
        }
        unresolved += report.unresolved.len();
        let apsp = AllPairs::new(&big);
        for s in &report.splits {
            let w = s
                .edges
                .iter()
                .fold(Weight::zero(), |a, &e| a + big.edge(e).weight);
            assert_eq!(Some(w), apsp.dist(s.u, s.v), "seed {seed}: split {s:?}");
        }
    }
    println!("{unresolved} unresolved terminals, {degree_breaks} routings break the degree law");
}

#[test]
fn disjoint_paths_have_no_splits() {
    let inst = sandkit::fixtures::triangle_gb();
    let routing =
        sandkit::fixtures::routing_from_nodes(&inst, &[vec![vec![1, 0]], vec![vec![2, 0]]]);
    let report = split_report(&inst, &routing).unwrap();
    assert!(report.splits.is_empty() && report.shared_edges.is_empty());
    assert_eq!(report.non_sharing, vec![1, 2]);
    assert!(report.fresh_pairs.is_empty());
    assert_eq!(
        report
            .splits
            .iter()
            .filter(|s| s.kind == SplitKind::Wide)
            .count(),
        0
    );
}

#[test]
fn gadget_split_graph_obeys_degree_law() {
    let inst = sandkit::fixtures::gadget_instance();
    let report = split_report(&inst, &sandkit::fixtures::gadget_routing()).unwrap();
    assert!(report.degree_violations().is_empty());
    assert!(report.unresolved.is_empty());
    assert_eq!(report.alternating_paths.len(), 2);
}
