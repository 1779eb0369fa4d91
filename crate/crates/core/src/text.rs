//! Line-based text formats for instances, capacity plans and walks.
//!
//! Instance:
//!
//! ```text
//! # comment
//! nodes 3
//! root 0
//! edge 0 1 1
//! edge 0 2 5/2
//! color 0: 1 2
//! ```
//!
//! Plan: a `plan <integral|fractional> <edge-count>` header followed by one
//! `cap <edge-id> <value>` line per nonzero entry.

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::model::{CapacityPlan, Edge, Instance, InstanceError, NodeId, PlanMode, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; 0 means end of input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("duplicate `root`")]
    DuplicateRoot,
    #[error("duplicate `nodes`")]
    DuplicateNodes,
    #[error("missing `nodes`")]
    MissingNodes,
    #[error("missing `root`")]
    MissingRoot,
    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),
    #[error("edge is a self-loop")]
    SelfLoop,
    #[error("invalid weight `{0}`")]
    BadWeight(String),
    #[error("color contains root")]
    ColorContainsRoot,
    #[error("color references unknown node {0}")]
    UnknownColorNode(usize),
    #[error("color lists node {0} twice")]
    DuplicateColorNode(usize),
    #[error("color is empty")]
    EmptyColor,
    #[error("expected color {expected}, found color {found}")]
    ColorOutOfOrder { expected: usize, found: usize },
    #[error("edge id {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("duplicate entry for edge {0}")]
    DuplicateCap(usize),
    #[error("invalid capacity `{0}`")]
    BadCapacity(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses a nonnegative rational: `3`, `2.5` or `5/2`.
pub fn parse_weight(s: &str) -> Option<Weight> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().ok()?;
        let q: i64 = q.parse().ok()?;
        if p < 0 || q <= 0 {
            return None;
        }
        return Some(Weight::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int: i64 = int.parse().ok()?;
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let num = int.checked_mul(scale)?.checked_add(frac.parse().ok()?)?;
        return Some(Weight::new(num, scale));
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) || s.is_empty() {
        return None;
    }
    s.parse().ok().map(Weight::from_integer)
}

/// Canonical weight text: integers as-is, terminating fractions as exact
/// decimals, anything else as `p/q`.
pub fn format_weight(w: &Weight) -> String {
    if w.is_integer() {
        return w.numer().to_string();
    }
    let mut den = *w.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", w.numer(), w.denom());
    }
    let digits = twos.max(fives);
    let scale = 10i128.pow(digits);
    let scaled = *w.numer() as i128 * (scale / *w.denom() as i128);
    let sign = if scaled < 0 { "-" } else { "" };
    let scaled = scaled.abs();
    let int = scaled / scale;
    let frac = scaled % scale;
    let mut frac = format!("{:0width$}", frac, width = digits as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    format!("{sign}{int}.{frac}")
}

/// Floating point output rounded to 9 decimals with trailing zeros trimmed.
pub fn format_float(x: f64) -> String {
    let mut s = format!("{:.9}", x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn parse_id(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| {
        err(
            line,
            ParseErrorKind::Malformed(format!("expected node id, got `{tok}`")),
        )
    })
}

/// Strips comments and blank lines, yielding `(line number, content)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut nodes: Option<usize> = None;
    let mut root: Option<(usize, NodeId)> = None;
    let mut edges = Vec::new();
    let mut colors: Vec<(usize, Vec<NodeId>)> = Vec::new();

    for (line, body) in content_lines(text) {
        let mut toks = body.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        let need_nodes =
            |nodes: Option<usize>| nodes.ok_or(err(line, ParseErrorKind::MissingNodes));
        match keyword {
            "nodes" => {
                if nodes.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateNodes));
                }
                let n = match (toks.next(), toks.next()) {
                    (Some(t), None) => parse_id(t, line)?,
                    _ => {
                        return Err(err(
                            line,
                            ParseErrorKind::Malformed("expected `nodes <n>`".into()),
                        ))
                    }
                };
                if n == 0 {
                    return Err(err(
                        line,
                        ParseErrorKind::Malformed("node count must be positive".into()),
                    ));
                }
                nodes = Some(n);
            }
            "root" => {
                let n = need_nodes(nodes)?;
                if root.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateRoot));
                }
                let r = match (toks.next(), toks.next()) {
                    (Some(t), None) => parse_id(t, line)?,
                    _ => {
                        return Err(err(
                            line,
                            ParseErrorKind::Malformed("expected `root <id>`".into()),
                        ))
                    }
                };
                if r >= n {
                    return Err(err(line, ParseErrorKind::NodeOutOfRange(r)));
                }
                root = Some((line, r));
            }
            "edge" => {
                let n = need_nodes(nodes)?;
                let parts: Vec<&str> = toks.collect();
                if parts.len() != 3 {
                    return Err(err(
                        line,
                        ParseErrorKind::Malformed("expected `edge <u> <v> <w>`".into()),
                    ));
                }
                let u = parse_id(parts[0], line)?;
                let v = parse_id(parts[1], line)?;
                for x in [u, v] {
                    if x >= n {
                        return Err(err(line, ParseErrorKind::NodeOutOfRange(x)));
                    }
                }
                if u == v {
                    return Err(err(line, ParseErrorKind::SelfLoop));
                }
                let w = parse_weight(parts[2])
                    .ok_or_else(|| err(line, ParseErrorKind::BadWeight(parts[2].to_string())))?;
                edges.push(Edge::new(u, v, w));
            }
            "color" => {
                let n = need_nodes(nodes)?;
                let rest = body["color".len()..].trim();
                let (idx, members) = rest.split_once(':').ok_or_else(|| {
                    err(
                        line,
                        ParseErrorKind::Malformed("expected `color <i>: <ids>`".into()),
                    )
                })?;
                let idx: usize = idx.trim().parse().map_err(|_| {
                    err(
                        line,
                        ParseErrorKind::Malformed(format!("bad color index `{}`", idx.trim())),
                    )
                })?;
                if idx != colors.len() {
                    return Err(err(
                        line,
                        ParseErrorKind::ColorOutOfOrder {
                            expected: colors.len(),
                            found: idx,
                        },
                    ));
                }
                let mut ids = Vec::new();
                for tok in members.split_whitespace() {
                    let id = parse_id(tok, line)?;
                    if id >= n {
                        return Err(err(line, ParseErrorKind::UnknownColorNode(id)));
                    }
                    if ids.contains(&id) {
                        return Err(err(line, ParseErrorKind::DuplicateColorNode(id)));
                    }
                    ids.push(id);
                }
                if ids.is_empty() {
                    return Err(err(line, ParseErrorKind::EmptyColor));
                }
                colors.push((line, ids));
            }
            other => {
                return Err(err(
                    line,
                    ParseErrorKind::Malformed(format!("unknown keyword `{other}`")),
                ));
            }
        }
    }

    let n = nodes.ok_or(err(0, ParseErrorKind::MissingNodes))?;
    let (_, r) = root.ok_or(err(0, ParseErrorKind::MissingRoot))?;
    for (line, ids) in &colors {
        if ids.contains(&r) {
            return Err(err(*line, ParseErrorKind::ColorContainsRoot));
        }
    }
    let color_sets = colors.into_iter().map(|(_, ids)| ids).collect();
    Instance::new(n, r, edges, color_sets).map_err(|e| {
        // Everything Instance::new checks was already checked per line.
        let kind = match e {
            InstanceError::ColorContainsRoot(_) => ParseErrorKind::ColorContainsRoot,
            other => ParseErrorKind::Malformed(other.to_string()),
        };
        err(0, kind)
    })
}

/// Canonical text: header, edges in id order, colors in index order.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "nodes {}\nroot {}\n",
        inst.node_count(),
        inst.root()
    ));
    for e in inst.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            e.u,
            e.v,
            format_weight(&e.weight)
        ));
    }
    for (i, c) in inst.colors().iter().enumerate() {
        let ids: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("color {}: {}\n", i, ids.join(" ")));
    }
    out
}

pub fn parse_plan(text: &str) -> Result<CapacityPlan, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or(err(0, ParseErrorKind::Malformed("empty plan".into())))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "plan" {
        return Err(err(
            hline,
            ParseErrorKind::Malformed("expected `plan <integral|fractional> <edge-count>`".into()),
        ));
    }
    let mode = match parts[1] {
        "integral" => PlanMode::Integral,
        "fractional" => PlanMode::Fractional,
        other => {
            return Err(err(
                hline,
                ParseErrorKind::Malformed(format!("unknown plan mode `{other}`")),
            ))
        }
    };
    let len: usize = parts[2].parse().map_err(|_| {
        err(
            hline,
            ParseErrorKind::Malformed(format!("bad edge count `{}`", parts[2])),
        )
    })?;
    let mut plan = CapacityPlan::zeros(mode, len);
    let mut seen = vec![false; len];
    for (line, body) in lines {
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "cap" {
            return Err(err(
                line,
                ParseErrorKind::Malformed("expected `cap <edge-id> <value>`".into()),
            ));
        }
        let id: usize = parts[1].parse().map_err(|_| {
            err(
                line,
                ParseErrorKind::Malformed(format!("bad edge id `{}`", parts[1])),
            )
        })?;
        if id >= len {
            return Err(err(line, ParseErrorKind::EdgeOutOfRange(id)));
        }
        if std::mem::replace(&mut seen[id], true) {
            return Err(err(line, ParseErrorKind::DuplicateCap(id)));
        }
        let bad = || err(line, ParseErrorKind::BadCapacity(parts[2].to_string()));
        match &mut plan {
            CapacityPlan::Integral(x) => x[id] = parts[2].parse().map_err(|_| bad())?,
            CapacityPlan::Fractional(x) => {
                let v = match parse_weight(parts[2]) {
                    Some(w) => w.to_f64().ok_or_else(bad)?,
                    None => parts[2].parse::<f64>().map_err(|_| bad())?,
                };
                if !v.is_finite() || v < 0.0 {
                    return Err(bad());
                }
                x[id] = v;
            }
        }
    }
    Ok(plan)
}

pub fn serialize_plan(plan: &CapacityPlan) -> String {
    let mut out = format!("plan {} {}\n", plan.mode(), plan.len());
    match plan {
        CapacityPlan::Integral(x) => {
            for (id, &c) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
                out.push_str(&format!("cap {id} {c}\n"));
            }
        }
        CapacityPlan::Fractional(x) => {
            // `{}` on f64 is the shortest text that round-trips exactly.
            for (id, &c) in x.iter().enumerate().filter(|(_, c)| **c != 0.0) {
                out.push_str(&format!("cap {id} {c}\n"));
            }
        }
    }
    out
}

/// Whitespace-separated vertex ids.
pub fn parse_walk(text: &str) -> Result<Vec<NodeId>, ParseError> {
    let mut walk = Vec::new();
    for (line, body) in content_lines(text) {
        for tok in body.split_whitespace() {
            walk.push(parse_id(tok, line)?);
        }
    }
    Ok(walk)
}

pub fn serialize_walk(walk: &[NodeId]) -> String {
    let ids: Vec<String> = walk.iter().map(|v| v.to_string()).collect();
    format!("{}\n", ids.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "nodes 3\nroot 0\nedge 0 1 1\nedge 0 2 1\ncolor 0: 1 2\n";

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance(SMALL).unwrap();
        assert_eq!(inst.node_count(), 3);
        assert_eq!(inst.root(), 0);
        assert_eq!(inst.edge_count(), 2);
        assert_eq!(inst.colors(), &[vec![1, 2]]);
        assert_eq!(serialize_instance(&inst), SMALL);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nnodes 2 # two\nroot 0\n\nedge 0 1 0\ncolor 0: 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(
            serialize_instance(&inst),
            "nodes 2\nroot 0\nedge 0 1 0\ncolor 0: 1\n"
        );
    }

    #[test]
    fn distinct_errors_name_the_line() {
        let cases = [
            (
                "nodes 2\nroot 0\nedge 0 1 1\ncolor 0: 0\n",
                4,
                ParseErrorKind::ColorContainsRoot,
            ),
            (
                "nodes 2\nroot 0\nroot 1\n",
                3,
                ParseErrorKind::DuplicateRoot,
            ),
            (
                "nodes 2\nroot 0\nedge 0 5 1\n",
                3,
                ParseErrorKind::NodeOutOfRange(5),
            ),
            (
                "nodes 2\nroot 0\ncolor 0: 7\n",
                3,
                ParseErrorKind::UnknownColorNode(7),
            ),
            ("nodes 2\nroot 0\nedge 1 1 1\n", 3, ParseErrorKind::SelfLoop),
            (
                "nodes 2\nroot 0\ncolor 1: 1\n",
                3,
                ParseErrorKind::ColorOutOfOrder {
                    expected: 0,
                    found: 1,
                },
            ),
            (
                "nodes 2\nroot 0\nedge 0 1 -1\n",
                3,
                ParseErrorKind::BadWeight("-1".into()),
            ),
        ];
        for (text, line, kind) in cases {
            assert_eq!(
                parse_instance(text),
                Err(ParseError { line, kind }),
                "{text}"
            );
        }
        let e = parse_instance("nodes 2\nroot 0\nedge 0 1 1\nbogus\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::Malformed(_)));
        let msg = parse_instance("nodes 2\nroot 0\ncolor 0: 0\n")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("color contains root"), "{msg}");
    }

    #[test]
    fn root_declared_after_colors_still_checked() {
        let e = parse_instance("nodes 3\ncolor 0: 1\nroot 1\n").unwrap_err();
        assert_eq!(
            e,
            ParseError {
                line: 2,
                kind: ParseErrorKind::ColorContainsRoot
            }
        );
    }

    #[test]
    fn weights_round_trip() {
        for (text, canon) in [
            ("0", "0"),
            ("3", "3"),
            ("2.50", "2.5"),
            ("5/2", "2.5"),
            ("1/3", "1/3"),
            ("0.125", "0.125"),
            ("7/20", "0.35"),
        ] {
            let w = parse_weight(text).unwrap();
            assert_eq!(format_weight(&w), canon);
            assert_eq!(parse_weight(canon), Some(w));
        }
        for bad in ["", "-1", "1/0", "x", "1.", ".5", "1/-2"] {
            assert_eq!(parse_weight(bad), None, "{bad}");
        }
    }

    #[test]
    fn two_node_canonical_form() {
        let inst = Instance::new(
            2,
            0,
            vec![Edge::new(0, 1, Weight::from_integer(1))],
            vec![vec![1]],
        )
        .unwrap();
        assert_eq!(
            serialize_instance(&inst),
            "nodes 2\nroot 0\nedge 0 1 1\ncolor 0: 1\n"
        );
    }

    #[test]
    fn plan_formats() {
        let plan = CapacityPlan::Integral(vec![1, 0, 2]);
        let text = serialize_plan(&plan);
        assert_eq!(text, "plan integral 3\ncap 0 1\ncap 2 2\n");
        assert_eq!(parse_plan(&text).unwrap(), plan);

        let frac = CapacityPlan::Fractional(vec![0.1, 4.0 / 35.0, 0.0]);
        assert_eq!(parse_plan(&serialize_plan(&frac)).unwrap(), frac);
        let exact = parse_plan("plan fractional 2\ncap 1 4/35\n").unwrap();
        assert_eq!(exact.value(1), 4.0 / 35.0);

        assert!(matches!(
            parse_plan("plan integral 2\ncap 2 1\n").unwrap_err().kind,
            ParseErrorKind::EdgeOutOfRange(2)
        ));
        assert!(matches!(
            parse_plan("plan integral 2\ncap 0 1.5\n").unwrap_err().kind,
            ParseErrorKind::BadCapacity(_)
        ));
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(32.800000000000004), "32.8");
        assert_eq!(format_float(12.0), "12");
        assert_eq!(format_float(-0.0), "0");
    }
}
