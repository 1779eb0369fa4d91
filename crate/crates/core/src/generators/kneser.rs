use super::GenError;
use crate::model::{CapacityPlan, Edge, Instance, NodeId, Weight};

pub const MAX_KNESER_S: usize = 6;

/// `s`-subsets of `{0, …, 2s}` in lexicographic order.
fn subsets(s: usize) -> Vec<Vec<usize>> {
    let n = 2 * s + 1;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..s).rev().find(|&i| cur[i] < n - s + i) else {
            return out;
        };
        cur[i] += 1;
        for k in i + 1..s {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Root-augmented odd graph `O_s` with one color per adjacent pair and the
/// fractional reference plan.
///
/// Node 0 is the root and nodes `1..=n` are the `s`-subsets of `[2s+1]`,
/// adjacent iff disjoint. Root edges (weight 2) come first, then graph edges
/// (weight 1). The color of an ordered pair `(u, v)` is `{u} ∪ N(u) ∖ {v}`;
/// with `ordered = false` only pairs with `u < v` are kept. The plan puts
/// `(s+1)/n` on root edges and `(s+1)/(s²+1) − (s+1)²/((s²+1)n)` elsewhere.
pub fn gen_kneser(s: usize, ordered: bool) -> Result<(Instance, CapacityPlan), GenError> {
    if !(2..=MAX_KNESER_S).contains(&s) {
        return Err(GenError::KneserSize(s));
    }
    let sets = subsets(s);
    let n = sets.len();
    let mut edges: Vec<Edge> = (1..=n)
        .map(|v| Edge::new(0, v, Weight::from_integer(2)))
        .collect();
    let mut nbrs: Vec<Vec<NodeId>> = vec![Vec::new(); n + 1];
    for a in 0..n {
        for b in a + 1..n {
            if disjoint(&sets[a], &sets[b]) {
                edges.push(Edge::new(a + 1, b + 1, Weight::from_integer(1)));
                nbrs[a + 1].push(b + 1);
                nbrs[b + 1].push(a + 1);
            }
        }
    }
    let mut colors = Vec::new();
    for u in 1..=n {
        let mut around = nbrs[u].clone();
        around.sort();
        for &v in &around {
            if !ordered && v < u {
                continue;
            }
            let mut c: Vec<NodeId> = std::iter::once(u)
                .chain(around.iter().copied().filter(|&x| x != v))
                .collect();
            c.sort();
            colors.push(c);
        }
    }
    let sf = s as f64;
    let nf = n as f64;
    let root_value = (sf + 1.0) / nf;
    let other = (sf + 1.0) / (sf * sf + 1.0) - (sf + 1.0).powi(2) / ((sf * sf + 1.0) * nf);
    let plan = CapacityPlan::Fractional(
        (0..edges.len())
            .map(|e| if e < n { root_value } else { other })
            .collect(),
    );
    let inst = Instance::new(n + 1, 0, edges, colors)?;
    Ok((inst, plan))
}
