//! Small hand-built instances shared by tests, examples and the CLI.

use crate::flow::Routing;
use crate::model::{Edge, Instance, NodeId, Weight};

pub const I2_ROOT: NodeId = 0;
pub const I2_V: NodeId = 1;
pub const I2_G: NodeId = 2;
pub const I2_B: NodeId = 3;

fn w(n: i64) -> Weight {
    Weight::from_integer(n)
}

/// Root `r`, hub `v`, green `g`, blue `b`: edges `(r,v,10)`, `(v,g,1)`, `(v,b,1)`.
pub fn i2() -> Instance {
    Instance::new(
        4,
        I2_ROOT,
        vec![
            Edge::new(I2_ROOT, I2_V, w(10)),
            Edge::new(I2_V, I2_G, w(1)),
            Edge::new(I2_V, I2_B, w(1)),
        ],
        vec![vec![I2_G], vec![I2_B]],
    )
    .unwrap()
}

/// Triangle `r=0, g=1, b=2` with `(r,g,3)`, `(r,b,3)`, `(g,b,1)`.
pub fn triangle_gb() -> Instance {
    Instance::new(
        3,
        0,
        vec![
            Edge::new(0, 1, w(3)),
            Edge::new(0, 2, w(3)),
            Edge::new(1, 2, w(1)),
        ],
        vec![vec![1], vec![2]],
    )
    .unwrap()
}

/// Unit-weight path `r=0 – a=1 – b=2` with the given colors.
pub fn unit_path(colors: Vec<Vec<NodeId>>) -> Instance {
    Instance::new(
        3,
        0,
        vec![Edge::new(0, 1, w(1)), Edge::new(1, 2, w(1))],
        colors,
    )
    .unwrap()
}

/// Node ids of the two-color cycle gadget with crossing flows.
pub mod gadget {
    use crate::model::NodeId;
    pub const ROOT: NodeId = 0;
    pub const G1: NodeId = 7;
    pub const G2: NodeId = 8;
    pub const B1: NodeId = 9;
    pub const B2: NodeId = 10;
}

/// The cycle gadget: root, inner nodes 1–6, green terminals `g1=7, g2=8`, blue
/// terminals `b1=9, b2=10`, all edges of unit weight. Its routing has `b1`/`g2`
/// going counterclockwise and `b2`/`g1` clockwise around the cycle.
pub fn gadget_instance() -> Instance {
    use gadget::*;
    let pairs = [
        (B1, 5),
        (5, 3),
        (3, 1),
        (1, ROOT),
        (G1, 6),
        (6, 4),
        (4, 2),
        (2, ROOT),
        (B2, 3),
        (G2, 4),
        (5, 6),
    ];
    Instance::new(
        11,
        ROOT,
        pairs.iter().map(|&(u, v)| Edge::new(u, v, w(1))).collect(),
        vec![vec![G1, G2], vec![B1, B2]],
    )
    .unwrap()
}

pub fn gadget_routing() -> Routing {
    use gadget::*;
    let inst = gadget_instance();
    routing_from_nodes(
        &inst,
        &[
            vec![vec![G1, 6, 5, 3, 1, ROOT], vec![G2, 4, 2, ROOT]],
            vec![vec![B1, 5, 6, 4, 2, ROOT], vec![B2, 3, 1, ROOT]],
        ],
    )
}

/// Builds a routing from node sequences. Panics if two consecutive nodes are
/// not adjacent.
pub fn routing_from_nodes(inst: &Instance, colors: &[Vec<Vec<NodeId>>]) -> Routing {
    Routing::from_node_paths(inst, colors).expect("fixture paths are valid")
}
