use std::collections::BTreeSet;
use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::simplex::{solve_covering, Row};
use super::LpError;
use crate::flow::{deficient_colors, FEASIBILITY_TOL};
use crate::model::{CapacityPlan, CutConstraint, Instance, NodeId};
use crate::paths::disconnected_terminal;

/// Violated cut constraints of a fractional point: one per color whose max
/// flow falls more than `1e-7` short of its demand.
pub fn separate(inst: &Instance, x: &CapacityPlan) -> Result<Vec<CutConstraint>, LpError> {
    Ok(deficient_colors(inst, x, FEASIBILITY_TOL)?
        .into_iter()
        .map(|(cut, _)| cut)
        .collect())
}

/// Accumulated cut constraints, deduplicated by node set (keeping the
/// largest right-hand side seen).
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    cuts: Vec<CutConstraint>,
    rows: Vec<Row>,
    index: HashMap<BTreeSet<NodeId>, usize>,
}

impl CutPool {
    /// Pool seeded with `x(δ({t})) ≥ 1` for every terminal `t`.
    pub fn singletons(inst: &Instance) -> Self {
        let mut pool = CutPool::default();
        for t in inst.terminals() {
            let witness = (0..inst.color_count())
                .find(|&i| inst.color(i).contains(&t))
                .expect("terminal belongs to a color");
            pool.add(
                inst,
                CutConstraint {
                    node_set: BTreeSet::from([t]),
                    rhs: 1,
                    witness_color: witness,
                },
            );
        }
        pool
    }

    /// Returns whether the pool changed.
    pub fn add(&mut self, inst: &Instance, cut: CutConstraint) -> bool {
        if let Some(&i) = self.index.get(&cut.node_set) {
            if self.cuts[i].rhs >= cut.rhs {
                return false;
            }
            self.rows[i].rhs = cut.rhs as f64;
            self.cuts[i] = cut;
            return true;
        }
        let coeffs = inst
            .boundary(&cut.node_set)
            .into_iter()
            .map(|e| (e, 1.0))
            .collect();
        self.rows.push(Row::new(coeffs, cut.rhs as f64));
        self.index.insert(cut.node_set.clone(), self.cuts.len());
        self.cuts.push(cut);
        true
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn cuts(&self) -> &[CutConstraint] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub plan: CapacityPlan,
    pub optimum: f64,
    /// Size of the final working cut set.
    pub cuts: usize,
    pub rounds: usize,
}

pub(crate) fn edge_costs(inst: &Instance) -> Vec<f64> {
    inst.edges()
        .iter()
        .map(|e| e.weight.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// Optimum of the cut-covering LP relaxation by cutting planes.
pub fn solve_lp(inst: &Instance) -> Result<LpOutcome, LpError> {
    if let Some(t) = disconnected_terminal(inst) {
        return Err(LpError::Disconnected(t));
    }
    let cost = edge_costs(inst);
    let mut pool = CutPool::singletons(inst);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let sol = solve_covering(&cost, pool.rows())?;
        let plan = CapacityPlan::Fractional(sol.x);
        let violated = separate(inst, &plan)?;
        if violated.is_empty() {
            return Ok(LpOutcome {
                plan,
                optimum: sol.objective,
                cuts: pool.len(),
                rounds,
            });
        }
        let mut grew = false;
        for cut in violated {
            grew |= pool.add(inst, cut);
        }
        if !grew {
            return Err(LpError::Stalled);
        }
    }
}
