//! Branch-and-bound over the cut-covering LP.
//!
//! Every edge carries the upper bound `max_i |C_i|`: a single color never
//! routes more than `|C_i|` units across an edge, so larger capacities are
//! never needed.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::cutting::{edge_costs, separate, CutPool};
use super::simplex::{solve_covering, LpSolution, Row, SimplexError};
use super::LpError;
use crate::approx::shortest_path_solve;
use crate::flow::deficient_colors;
use crate::model::{plan_cost, CapacityPlan, Instance, Weight};
use crate::paths::disconnected_terminal;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;
const RESTART_INTERVAL: u64 = 10_000;
const INTEGRAL_TOL: f64 = 1e-6;

/// Node budget from `SANDKIT_BUDGET`, falling back to `default`.
pub fn budget_from_env(default: u64) -> u64 {
    std::env::var("SANDKIT_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub plan: CapacityPlan,
    pub optimum: Weight,
    /// Branch-and-bound nodes processed.
    pub nodes: u64,
    pub cuts: usize,
}

/// Best known solution when the search stops early.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub plan: CapacityPlan,
    pub cost: Weight,
}

#[derive(Debug, Clone)]
struct Node {
    lo: Vec<u64>,
    hi: Vec<u64>,
    bound: f64,
}

struct Search<'a> {
    inst: &'a Instance,
    cost: Vec<f64>,
    pool: CutPool,
    /// Least common denominator of the weights, when it fits.
    scale: Option<i64>,
    incumbent: Option<Incumbent>,
}

enum NodeLp {
    Infeasible,
    Pruned,
    Solved(LpSolution),
}

impl<'a> Search<'a> {
    fn bound_rows(&self, node: &Node) -> Vec<Row> {
        let mut rows = Vec::new();
        for e in 0..node.lo.len() {
            if node.lo[e] > 0 {
                rows.push(Row::new(vec![(e, 1.0)], node.lo[e] as f64));
            }
            rows.push(Row::new(vec![(e, -1.0)], -(node.hi[e] as f64)));
        }
        rows
    }

    /// Whether no integral point with LP value `bound` beats the incumbent.
    fn dominated(&self, bound: f64) -> bool {
        let Some(inc) = &self.incumbent else {
            return false;
        };
        match self.scale {
            Some(s) => {
                let scaled = (inc.cost * Weight::from_integer(s)).to_integer() as f64;
                (bound * s as f64 - INTEGRAL_TOL).ceil() >= scaled
            }
            None => bound >= inc.cost.to_f64().unwrap_or(f64::INFINITY) - 1e-9,
        }
    }

    fn offer(&mut self, plan: CapacityPlan) -> Result<(), LpError> {
        let Some(cost) = plan_cost(self.inst, &plan)?.exact() else {
            return Ok(());
        };
        if self.incumbent.as_ref().is_none_or(|inc| cost < inc.cost) {
            self.incumbent = Some(Incumbent { plan, cost });
        }
        Ok(())
    }

    fn solve_node(&mut self, node: &Node) -> Result<NodeLp, LpError> {
        let bounds = self.bound_rows(node);
        loop {
            let mut rows = self.pool.rows().to_vec();
            rows.extend_from_slice(&bounds);
            let sol = match solve_covering(&self.cost, &rows) {
                Ok(sol) => sol,
                Err(SimplexError::Infeasible) => return Ok(NodeLp::Infeasible),
                Err(e) => return Err(e.into()),
            };
            if self.dominated(sol.objective) {
                return Ok(NodeLp::Pruned);
            }
            let point = CapacityPlan::Fractional(sol.x.clone());
            let mut violated = separate(self.inst, &point)?;
            if violated.is_empty() {
                let Some(rounded) = round_integral(&sol.x) else {
                    return Ok(NodeLp::Solved(sol));
                };
                let plan = CapacityPlan::Integral(rounded);
                violated = deficient_colors(self.inst, &plan, 0.0)?
                    .into_iter()
                    .map(|(c, _)| c)
                    .collect();
                if violated.is_empty() {
                    return Ok(NodeLp::Solved(sol));
                }
            }
            let mut grew = false;
            for cut in violated {
                grew |= self.pool.add(self.inst, cut);
            }
            if !grew {
                return Err(LpError::Stalled);
            }
        }
    }
}

fn round_integral(x: &[f64]) -> Option<Vec<u64>> {
    x.iter()
        .map(|&v| {
            let r = v.round();
            ((v - r).abs() <= INTEGRAL_TOL).then_some(r.max(0.0) as u64)
        })
        .collect()
}

/// Most fractional variable, ties to the lowest edge id.
fn branching_variable(x: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (e, &v) in x.iter().enumerate() {
        let f = v - v.floor();
        let score = f.min(1.0 - f);
        if score > INTEGRAL_TOL && best.is_none_or(|(_, s)| score > s) {
            best = Some((e, score));
        }
    }
    best.map(|(e, _)| e)
}

fn weight_scale(inst: &Instance) -> Option<i64> {
    let mut l: i64 = 1;
    for e in inst.edges() {
        l = l.checked_mul(*e.weight.denom() / l.gcd(e.weight.denom()))?;
    }
    let total = inst.total_weight()
        * Weight::from_integer(l)
        * Weight::from_integer(inst.max_color_size() as i64);
    // Keep scaled costs exactly representable as f64.
    (total.to_integer().abs() < (1i64 << 52)).then_some(l)
}

/// Optimal integral plan by LP-based branch-and-bound, processing at most
/// `node_budget` nodes.
pub fn solve_exact(inst: &Instance, node_budget: u64) -> Result<ExactOutcome, LpError> {
    if let Some(t) = disconnected_terminal(inst) {
        return Err(LpError::Disconnected(t));
    }
    let mut search = Search {
        inst,
        cost: edge_costs(inst),
        pool: CutPool::singletons(inst),
        scale: weight_scale(inst),
        incumbent: None,
    };
    search.offer(shortest_path_solve(inst)?)?;

    let cap = inst.max_color_size() as u64;
    let m = inst.edge_count();
    let mut stack = vec![Node {
        lo: vec![0; m],
        hi: vec![cap; m],
        bound: 0.0,
    }];
    let mut nodes: u64 = 0;
    while let Some(node) = stack.pop() {
        if search.dominated(node.bound) {
            continue;
        }
        if nodes >= node_budget {
            stack.push(node);
            let lower = stack.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
            return Err(LpError::BudgetExceeded {
                incumbent: search.incumbent.map(Box::new),
                lower_bound: lower,
                nodes,
            });
        }
        nodes += 1;
        if nodes.is_multiple_of(RESTART_INTERVAL) {
            // Best-bound restart: the most promising open node goes on top.
            stack.sort_by(|a, b| b.bound.total_cmp(&a.bound));
        }

        let sol = match search.solve_node(&node)? {
            NodeLp::Infeasible | NodeLp::Pruned => continue,
            NodeLp::Solved(sol) => sol,
        };
        match branching_variable(&sol.x) {
            None => {
                let plan =
                    CapacityPlan::Integral(round_integral(&sol.x).expect("no fractional variable"));
                search.offer(plan)?;
            }
            Some(e) => {
                let v = sol.x[e];
                let mut down = node.clone();
                down.hi[e] = v.floor() as u64;
                down.bound = sol.objective;
                let mut up = node;
                up.lo[e] = v.ceil() as u64;
                up.bound = sol.objective;
                stack.push(down);
                stack.push(up);
            }
        }
    }

    let inc = search
        .incumbent
        .expect("shortest-path incumbent always exists");
    debug_assert!(inc.cost >= Weight::zero());
    Ok(ExactOutcome {
        plan: inc.plan,
        optimum: inc.cost,
        nodes,
        cuts: search.pool.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{i2, triangle_gb};
    use crate::flow::check_feasible;
    use crate::model::Edge;

    fn w(n: i64) -> Weight {
        Weight::from_integer(n)
    }

    #[test]
    fn exact_i2() {
        let out = solve_exact(&i2(), 1000).unwrap();
        assert_eq!(out.optimum, w(12));
        assert!(check_feasible(&i2(), &out.plan).unwrap().is_feasible());
    }

    #[test]
    fn exact_triangle_single_color() {
        let inst = Instance::new(
            3,
            0,
            vec![
                Edge::new(0, 1, w(1)),
                Edge::new(0, 2, w(1)),
                Edge::new(1, 2, w(1)),
            ],
            vec![vec![1, 2]],
        )
        .unwrap();
        let out = solve_exact(&inst, 1000).unwrap();
        assert_eq!(out.optimum, w(2));
        assert_eq!(out.plan, CapacityPlan::Integral(vec![1, 1, 0]));
    }

    #[test]
    fn exact_two_color_triangle() {
        assert_eq!(solve_exact(&triangle_gb(), 1000).unwrap().optimum, w(4));
    }

    #[test]
    fn fractional_weights() {
        let inst = Instance::new(
            3,
            0,
            vec![
                Edge::new(0, 1, Weight::new(1, 3)),
                Edge::new(0, 2, Weight::new(1, 2)),
                Edge::new(1, 2, Weight::new(1, 7)),
            ],
            vec![vec![1], vec![2]],
        )
        .unwrap();
        // Median 1: 1/3 + 1/7.
        assert_eq!(
            solve_exact(&inst, 1000).unwrap().optimum,
            Weight::new(10, 21)
        );
    }

    #[test]
    fn zero_budget_reports_incumbent() {
        match solve_exact(&triangle_gb(), 0) {
            Err(LpError::BudgetExceeded {
                incumbent: Some(inc),
                nodes: 0,
                ..
            }) => {
                assert_eq!(inc.cost, w(6));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn branching_picks_most_fractional() {
        assert_eq!(branching_variable(&[1.0, 0.3, 0.5, 1.5]), Some(2));
        assert_eq!(branching_variable(&[1.0, 2.0]), None);
        assert_eq!(round_integral(&[0.9999999, 2.0]), Some(vec![1, 2]));
    }
}
