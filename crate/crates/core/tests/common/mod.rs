#![allow(dead_code)]

use graphrep::lattice::{build_box, build_hexagonal_patch, build_torus};
use graphrep::MultiGraph;

/// Small connected hosts used by the exact identity checks, with designated
/// boundaries where the builders do not provide one.
pub fn fixtures() -> Vec<(&'static str, MultiGraph)> {
    vec![
        ("path4", MultiGraph::path(4).unwrap()),
        ("c4", MultiGraph::cycle(4).unwrap().with_boundary(vec![0, 2]).unwrap()),
        ("triangle", MultiGraph::cycle(3).unwrap().with_boundary(vec![0, 1]).unwrap()),
        ("grid3x3", build_box(2, 1).unwrap()),
        ("torus1x2", build_torus(2, 1).unwrap()),
        ("hex6", build_hexagonal_patch(3, 2).unwrap()),
    ]
}

pub fn k4() -> MultiGraph {
    MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// The grid with two rows of three vertices plus a pendant double edge.
pub fn ladder_with_double() -> MultiGraph {
    MultiGraph::from_edges(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5), (5, 6), (5, 6)]).unwrap()
}

pub fn origin_edge(g: &MultiGraph) -> usize {
    let d = g.dimension();
    let o = g.find_vertex(&vec![0; d]).unwrap();
    let mut e1 = vec![0; d];
    e1[0] = 1;
    let v = g.find_vertex(&e1).unwrap();
    g.find_edge(o, v).unwrap()
}
