use std::collections::BTreeSet;

use super::cnf::CnfFormula;
use super::GenError;
use crate::flow::Routing;
use crate::model::{CapacityPlan, Edge, EdgeId, Instance, NodeId, Weight};

/// Node and edge roles of a generated SAT instance. Indices are zero-based:
/// `clause_nodes[j]` is the node of clause `j`, `var_nodes[i][l]` is the
/// `(l+1)`-th gadget node of variable `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub root: NodeId,
    pub clause_nodes: Vec<NodeId>,
    pub var_nodes: Vec<[NodeId; 7]>,
    /// Root edges, four per variable.
    pub e1: Vec<EdgeId>,
    /// Gadget chain edges, six per variable.
    pub e2: Vec<EdgeId>,
    /// Clause edges, three per variable, in the order
    /// (node 2, first positive clause), (node 4, negative clause),
    /// (node 6, second positive clause).
    pub e3: Vec<EdgeId>,
    pub big_m: Weight,
    /// Per variable: (first positive clause, second positive clause, negative clause).
    pub occurrences: Vec<[usize; 3]>,
}

impl ReductionMap {
    /// Cost of the completeness certificate: `(M + 2)·m + 8p`.
    pub fn certificate_cost(&self) -> Weight {
        let m = self.clause_nodes.len() as i64;
        let p = self.var_nodes.len() as i64;
        (self.big_m + Weight::from_integer(2)) * Weight::from_integer(m)
            + Weight::from_integer(8 * p)
    }
}

pub fn default_big_m(formula: &CnfFormula) -> Weight {
    Weight::from_integer(2 * formula.clause_count() as i64 + 8 * formula.variable_count as i64 + 1)
}

fn occurrences(f: &CnfFormula) -> Result<Vec<[usize; 3]>, GenError> {
    let mut pos: Vec<Vec<usize>> = vec![Vec::new(); f.variable_count];
    let mut neg: Vec<Vec<usize>> = vec![Vec::new(); f.variable_count];
    for (j, clause) in f.clauses.iter().enumerate() {
        for l in clause {
            if l.positive {
                pos[l.var].push(j);
            } else {
                neg[l.var].push(j);
            }
        }
    }
    (0..f.variable_count)
        .map(|i| match (pos[i].as_slice(), neg[i].as_slice()) {
            (&[a, b], &[c]) if a != b => Ok([a, b, c]),
            _ => Err(GenError::NotNormalized(i)),
        })
        .collect()
}

/// Builds the two-color instance of a normalized formula. `big_m` defaults to
/// `2m + 8p + 1` and must exceed `2m + 8p`.
pub fn gen_sat(
    f: &CnfFormula,
    big_m: Option<Weight>,
) -> Result<(Instance, ReductionMap), GenError> {
    let occ = occurrences(f)?;
    let m = f.clause_count();
    let p = f.variable_count;
    let big_m = big_m.unwrap_or_else(|| default_big_m(f));
    let floor = Weight::from_integer(2 * m as i64 + 8 * p as i64);
    if big_m <= floor {
        return Err(GenError::SmallM {
            value: big_m,
            floor,
        });
    }
    let root = 0;
    let clause_nodes: Vec<NodeId> = (1..=m).collect();
    let var_nodes: Vec<[NodeId; 7]> = (0..p)
        .map(|i| std::array::from_fn(|l| 1 + m + 7 * i + l))
        .collect();

    let mut edges = Vec::with_capacity(13 * p);
    let (mut e1, mut e2, mut e3) = (Vec::new(), Vec::new(), Vec::new());
    let two = Weight::from_integer(2);
    let one = Weight::from_integer(1);
    for y in &var_nodes {
        for l in [0, 2, 4, 6] {
            e1.push(edges.len());
            edges.push(Edge::new(root, y[l], two));
        }
    }
    for y in &var_nodes {
        for l in 0..6 {
            e2.push(edges.len());
            edges.push(Edge::new(y[l], y[l + 1], one));
        }
    }
    for (y, &[i1, i2, i3]) in var_nodes.iter().zip(&occ) {
        for (l, j) in [(1, i1), (3, i3), (5, i2)] {
            e3.push(edges.len());
            edges.push(Edge::new(y[l], clause_nodes[j], big_m));
        }
    }

    let mut c1: Vec<NodeId> = clause_nodes.clone();
    let mut c2: Vec<NodeId> = clause_nodes.clone();
    for y in &var_nodes {
        c1.extend([y[0], y[4]]);
        c2.extend([y[2], y[6]]);
    }
    let inst = Instance::new(1 + m + 7 * p, root, edges, vec![c1, c2])?;
    let map = ReductionMap {
        root,
        clause_nodes,
        var_nodes,
        e1,
        e2,
        e3,
        big_m,
        occurrences: occ,
    };
    Ok((inst, map))
}

/// The completeness routing for a satisfying assignment: gadget terminals go
/// straight to the root, and each clause routes through the gadget of its
/// first true literal. The plan puts one unit on every used edge.
pub fn sat_certificate(
    inst: &Instance,
    f: &CnfFormula,
    assignment: &[bool],
    map: &ReductionMap,
) -> Result<(Routing, CapacityPlan), GenError> {
    if assignment.len() != f.variable_count {
        return Err(GenError::AssignmentLength {
            expected: f.variable_count,
            found: assignment.len(),
        });
    }
    let r = map.root;
    let mut green: Vec<Vec<NodeId>> = Vec::new();
    let mut blue: Vec<Vec<NodeId>> = Vec::new();
    for y in &map.var_nodes {
        green.push(vec![y[0], r]);
        green.push(vec![y[4], r]);
        blue.push(vec![y[2], r]);
        blue.push(vec![y[6], r]);
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        let lit = clause
            .iter()
            .find(|l| l.eval(assignment))
            .ok_or(GenError::Unsatisfied(j))?;
        let y = &map.var_nodes[lit.var];
        let [i1, i2, i3] = map.occurrences[lit.var];
        let k = map.clause_nodes[j];
        // Gadget node indices (zero-based) for the two colors' paths.
        let (entry, g_exit, b_exit) = if lit.positive && j == i1 {
            (1, 2, 0)
        } else if lit.positive && j == i2 {
            (5, 6, 4)
        } else if !lit.positive && j == i3 {
            (3, 2, 4)
        } else {
            return Err(GenError::NotNormalized(lit.var));
        };
        green.push(vec![k, y[entry], y[g_exit], r]);
        blue.push(vec![k, y[entry], y[b_exit], r]);
    }
    let routing = Routing::from_node_paths(inst, &[green, blue])
        .map_err(|e| GenError::Routing(e.to_string()))?;
    let used: BTreeSet<EdgeId> = routing
        .colors
        .iter()
        .flat_map(|walks| walks.values())
        .flat_map(|w| w.steps.iter().map(|s| s.edge))
        .collect();
    let mut caps = vec![0u64; inst.edge_count()];
    for e in used {
        caps[e] = 1;
    }
    Ok((routing, CapacityPlan::Integral(caps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::check_feasible;
    use crate::generators::cnf::Literal;
    use crate::model::plan_cost;

    fn f1() -> CnfFormula {
        CnfFormula {
            variable_count: 2,
            clauses: vec![
                vec![Literal::pos(0), Literal::pos(1)],
                vec![Literal::pos(0), Literal::pos(1)],
                vec![Literal::neg(0), Literal::neg(1)],
            ],
        }
    }

    #[test]
    fn f1_counts() {
        let (inst, map) = gen_sat(&f1(), Some(Weight::from_integer(23))).unwrap();
        assert_eq!(inst.node_count(), 18);
        assert_eq!(inst.edge_count(), 26);
        assert_eq!(inst.color(0).len(), 7);
        assert_eq!(inst.color(1).len(), 7);
        assert_eq!((map.e1.len(), map.e2.len(), map.e3.len()), (8, 12, 6));
    }

    #[test]
    fn e3_endpoints() {
        let (inst, map) = gen_sat(&f1(), None).unwrap();
        assert_eq!(map.big_m, Weight::from_integer(23));
        for (i, y) in map.var_nodes.iter().enumerate() {
            let [i1, i2, i3] = map.occurrences[i];
            let ends: Vec<(NodeId, NodeId)> = map.e3[3 * i..3 * i + 3]
                .iter()
                .map(|&e| (inst.edge(e).u, inst.edge(e).v))
                .collect();
            assert_eq!(
                ends,
                vec![
                    (y[1], map.clause_nodes[i1]),
                    (y[3], map.clause_nodes[i3]),
                    (y[5], map.clause_nodes[i2])
                ]
            );
        }
    }

    #[test]
    fn small_m_rejected() {
        assert!(matches!(
            gen_sat(&f1(), Some(Weight::from_integer(22))),
            Err(GenError::SmallM { .. })
        ));
    }

    #[test]
    fn f1_certificate() {
        let f = f1();
        let (inst, map) = gen_sat(&f, Some(Weight::from_integer(23))).unwrap();
        let (routing, plan) = sat_certificate(&inst, &f, &[true, false], &map).unwrap();
        routing.validate(&inst, Some(&plan)).unwrap();
        assert!(check_feasible(&inst, &plan).unwrap().is_feasible());
        assert_eq!(
            plan_cost(&inst, &plan).unwrap().exact(),
            Some(Weight::from_integer(91))
        );
        assert_eq!(map.certificate_cost(), Weight::from_integer(91));
    }

    #[test]
    fn unsatisfying_assignment() {
        let f = f1();
        let (inst, map) = gen_sat(&f, None).unwrap();
        assert_eq!(
            sat_certificate(&inst, &f, &[true, true], &map).unwrap_err(),
            GenError::Unsatisfied(2)
        );
    }
}
