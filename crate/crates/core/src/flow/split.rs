//! Shared-edge structure of a two-color routing.
//!
//! Color 0 is "green", color 1 is "blue". A split is a maximal run of
//! consecutive edges on a green walk that one blue walk also uses, all in the
//! same relative orientation. Wide splits are traversed in opposite directions
//! by the two partners, thin splits in the same direction.
//!
//! The split graph has one vertex per split and per terminal. Each terminal
//! walk contributes an arc from the terminal to its first split and from each
//! split to the next split on the walk. Alternating paths are peeled off that
//! graph starting from green terminals in ascending id; their endpoints are the
//! fresh pairs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use super::routing::{Direction, FlowError, Routing};
use crate::model::{EdgeId, Instance, NodeId, Weight};
use crate::text::format_weight;

pub const GREEN: usize = 0;
pub const BLUE: usize = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("split diagnostics need exactly 2 colors, found {0}")]
    ColorCount(usize),
    #[error("color {color} routes {count} walks over edge {edge}")]
    CapacityExceeded {
        color: usize,
        edge: EdgeId,
        count: usize,
    },
    #[error(transparent)]
    Routing(#[from] FlowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Wide,
    Thin,
}

impl SplitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitKind::Wide => "wide",
            SplitKind::Thin => "thin",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// First node of the run along the green walk.
    pub u: NodeId,
    /// Last node of the run along the green walk.
    pub v: NodeId,
    pub green: NodeId,
    pub blue: NodeId,
    pub kind: SplitKind,
    /// Edge ids in green walking order.
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SplitVertex {
    Split(usize),
    Terminal { color: usize, node: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitArc {
    pub from: SplitVertex,
    pub to: SplitVertex,
    /// Color of the walk that induced the arc.
    pub color: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitGraph {
    pub arcs: Vec<SplitArc>,
}

impl SplitGraph {
    pub fn in_arcs(&self, v: SplitVertex) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.to == v)
            .map(|(i, _)| i)
    }

    pub fn out_arcs(&self, v: SplitVertex) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.from == v)
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingPath {
    pub vertices: Vec<SplitVertex>,
    pub arcs: Vec<usize>,
}

/// Weight of used edges by category: blue-only, green-only, thin, wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostSplit {
    pub blue_only: Weight,
    pub green_only: Weight,
    pub thin: Weight,
    pub wide: Weight,
}

impl CostSplit {
    pub fn total(&self) -> Weight {
        self.blue_only + self.green_only + self.thin + self.wide
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub shared_edges: BTreeSet<EdgeId>,
    pub splits: Vec<Split>,
    pub split_graph: SplitGraph,
    pub alternating_paths: Vec<AlternatingPath>,
    pub fresh_pairs: Vec<(NodeId, NodeId)>,
    /// Terminals that share no edge with the other color.
    pub non_sharing: Vec<NodeId>,
    /// Sharing terminals not covered by any completed alternating path.
    pub unresolved: Vec<NodeId>,
    pub weights: CostSplit,
}

impl SplitReport {
    /// Split indices whose degrees break the expected law: indegree 2 with one
    /// arc per color, outdegree 0 or 2 with one arc per color.
    pub fn degree_violations(&self) -> Vec<usize> {
        (0..self.splits.len())
            .filter(|&s| {
                let v = SplitVertex::Split(s);
                let ins: Vec<usize> = self
                    .split_graph
                    .in_arcs(v)
                    .map(|a| self.split_graph.arcs[a].color)
                    .collect();
                let outs: Vec<usize> = self
                    .split_graph
                    .out_arcs(v)
                    .map(|a| self.split_graph.arcs[a].color)
                    .collect();
                let balanced =
                    |c: &[usize]| c.len() == 2 && c.contains(&GREEN) && c.contains(&BLUE);
                !balanced(&ins) || !(outs.is_empty() || balanced(&outs))
            })
            .collect()
    }

    /// Diagnostic text block. Dummy terminals are omitted.
    pub fn to_text(&self, inst: &Instance) -> String {
        let mut out = String::new();
        for s in &self.splits {
            let edges: Vec<String> = s.edges.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(
                out,
                "split {} {} {} g={} b={} edges={}",
                s.kind.as_str(),
                s.u,
                s.v,
                s.green,
                s.blue,
                edges.join(",")
            );
        }
        for &(g, b) in &self.fresh_pairs {
            if !inst.is_dummy(g) && !inst.is_dummy(b) {
                let _ = writeln!(out, "fresh {g} {b}");
            }
        }
        for &t in self.non_sharing.iter().filter(|t| !inst.is_dummy(**t)) {
            let _ = writeln!(out, "nonsharing {t}");
        }
        for &t in self.unresolved.iter().filter(|t| !inst.is_dummy(**t)) {
            let _ = writeln!(out, "unresolved {t}");
        }
        let w = &self.weights;
        let _ = writeln!(
            out,
            "weights wb={} wg={} wt={} wd={}",
            format_weight(&w.blue_only),
            format_weight(&w.green_only),
            format_weight(&w.thin),
            format_weight(&w.wide)
        );
        out
    }
}

pub fn split_report(inst: &Instance, routing: &Routing) -> Result<SplitReport, SplitError> {
    if inst.color_count() != 2 {
        return Err(SplitError::ColorCount(inst.color_count()));
    }
    routing.validate(inst, None)?;

    // Per color, per edge: the walk using it and its direction.
    let mut user: [Vec<Option<(NodeId, Direction)>>; 2] =
        [vec![None; inst.edge_count()], vec![None; inst.edge_count()]];
    for color in [GREEN, BLUE] {
        let mut count = vec![0usize; inst.edge_count()];
        for (&t, walk) in &routing.colors[color] {
            for step in &walk.steps {
                count[step.edge] += 1;
                if count[step.edge] > 1 {
                    return Err(SplitError::CapacityExceeded {
                        color,
                        edge: step.edge,
                        count: count[step.edge],
                    });
                }
                user[color][step.edge] = Some((t, step.dir));
            }
        }
    }

    let shared_edges: BTreeSet<EdgeId> = (0..inst.edge_count())
        .filter(|&e| user[GREEN][e].is_some() && user[BLUE][e].is_some())
        .collect();

    // Splits from green walks, plus each green terminal's split sequence.
    let mut splits: Vec<Split> = Vec::new();
    let mut split_of_edge = vec![None::<usize>; inst.edge_count()];
    let mut sequences: Vec<(usize, NodeId, Vec<usize>)> = Vec::new();
    for (&g, walk) in &routing.colors[GREEN] {
        let mut seq = Vec::new();
        let mut current: Option<(NodeId, SplitKind)> = None;
        for step in &walk.steps {
            let key = user[BLUE][step.edge].map(|(b, bdir)| {
                let kind = if bdir == step.dir {
                    SplitKind::Thin
                } else {
                    SplitKind::Wide
                };
                (b, kind)
            });
            match key {
                None => current = None,
                Some(k) => {
                    if current != Some(k) {
                        splits.push(Split {
                            u: step.tail(inst),
                            v: step.head(inst),
                            green: g,
                            blue: k.0,
                            kind: k.1,
                            edges: Vec::new(),
                        });
                        seq.push(splits.len() - 1);
                        current = Some(k);
                    }
                    let s = splits.last_mut().unwrap();
                    s.edges.push(step.edge);
                    s.v = step.head(inst);
                    split_of_edge[step.edge] = Some(splits.len() - 1);
                }
            }
        }
        sequences.push((GREEN, g, seq));
    }
    for (&b, walk) in &routing.colors[BLUE] {
        let mut seq: Vec<usize> = Vec::new();
        for step in &walk.steps {
            if let Some(s) = split_of_edge[step.edge] {
                if seq.last() != Some(&s) {
                    seq.push(s);
                }
            }
        }
        sequences.push((BLUE, b, seq));
    }

    let mut graph = SplitGraph::default();
    let mut non_sharing = Vec::new();
    for (color, t, seq) in &sequences {
        if seq.is_empty() {
            non_sharing.push(*t);
            continue;
        }
        let term = SplitVertex::Terminal {
            color: *color,
            node: *t,
        };
        graph.arcs.push(SplitArc {
            from: term,
            to: SplitVertex::Split(seq[0]),
            color: *color,
        });
        for pair in seq.windows(2) {
            graph.arcs.push(SplitArc {
                from: SplitVertex::Split(pair[0]),
                to: SplitVertex::Split(pair[1]),
                color: *color,
            });
        }
    }
    non_sharing.sort_unstable();
    non_sharing.dedup();

    let (alternating_paths, fresh_pairs, unresolved) = peel_alternating_paths(&graph, &sequences);

    let mut weights = CostSplit {
        blue_only: Weight::zero(),
        green_only: Weight::zero(),
        thin: Weight::zero(),
        wide: Weight::zero(),
    };
    for e in 0..inst.edge_count() {
        let w = inst.edge(e).weight;
        match (user[GREEN][e].is_some(), user[BLUE][e].is_some()) {
            (true, true) => match splits[split_of_edge[e].expect("shared edge has a split")].kind {
                SplitKind::Thin => weights.thin += w,
                SplitKind::Wide => weights.wide += w,
            },
            (true, false) => weights.green_only += w,
            (false, true) => weights.blue_only += w,
            (false, false) => {}
        }
    }

    Ok(SplitReport {
        shared_edges,
        splits,
        split_graph: graph,
        alternating_paths,
        fresh_pairs,
        non_sharing,
        unresolved,
        weights,
    })
}

type Peeled = (Vec<AlternatingPath>, Vec<(NodeId, NodeId)>, Vec<NodeId>);

fn peel_alternating_paths(graph: &SplitGraph, sequences: &[(usize, NodeId, Vec<usize>)]) -> Peeled {
    let mut used = vec![false; graph.arcs.len()];
    let mut paths = Vec::new();
    let mut fresh = Vec::new();
    let mut resolved = BTreeSet::new();

    let mut greens: Vec<NodeId> = sequences
        .iter()
        .filter(|(c, _, seq)| *c == GREEN && !seq.is_empty())
        .map(|(_, t, _)| *t)
        .collect();
    greens.sort_unstable();

    for g in greens {
        let start = SplitVertex::Terminal {
            color: GREEN,
            node: g,
        };
        let Some(first) = graph.out_arcs(start).find(|&a| !used[a]) else {
            continue;
        };
        used[first] = true;
        let mut arcs = vec![first];
        let mut vertices = vec![start, graph.arcs[first].to];
        let mut entering = first;
        let end = loop {
            let s = graph.arcs[entering].to;
            let want = 1 - graph.arcs[entering].color;
            let Some(other_in) = graph
                .in_arcs(s)
                .find(|&a| !used[a] && graph.arcs[a].color == want)
            else {
                break None;
            };
            used[other_in] = true;
            arcs.push(other_in);
            let w = graph.arcs[other_in].from;
            vertices.push(w);
            if let SplitVertex::Terminal { node, .. } = w {
                break Some(node);
            }
            let want = 1 - graph.arcs[other_in].color;
            let Some(next) = graph
                .out_arcs(w)
                .find(|&a| !used[a] && graph.arcs[a].color == want)
            else {
                break None;
            };
            used[next] = true;
            arcs.push(next);
            vertices.push(graph.arcs[next].to);
            entering = next;
        };
        if let Some(b) = end {
            resolved.insert(g);
            resolved.insert(b);
            fresh.push((g, b));
            paths.push(AlternatingPath { vertices, arcs });
        }
    }

    let mut unresolved: Vec<NodeId> = sequences
        .iter()
        .filter(|(_, t, seq)| !seq.is_empty() && !resolved.contains(t))
        .map(|(_, t, _)| *t)
        .collect();
    unresolved.sort_unstable();
    unresolved.dedup();
    (paths, fresh, unresolved)
}
