//! Faces and dual graphs of two-dimensional lattice embeddings.
//!
//! Each edge `e` carries two darts: `2e` runs `a → b` in the positive
//! direction of its axis label, `2e + 1` runs back. Dart directions are
//! numbered counterclockwise `E = 0, N = 1, W = 2, S = 3`, so the rotation
//! system at a vertex is read directly off the labels. This works for planar
//! patches and for tori alike; on tori the faces are those of the periodic
//! embedding.

use crate::bits::{EdgeConfig, SpinConfig};
use crate::error::{Error, Result};
use crate::lattice::{GraphKind, MultiGraph};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Faces {
    face_of_dart: Vec<u32>,
    darts: Vec<Vec<u32>>,
    outer: Option<usize>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.darts.len()
    }

    /// The face to the left of dart `d`.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.face_of_dart[d] as usize
    }

    /// Darts of face `f` in boundary order.
    pub fn darts(&self, f: usize) -> &[u32] {
        &self.darts[f]
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer
    }

    /// Tail vertices of the darts around face `f`, with repetition.
    pub fn face_vertices(&self, g: &MultiGraph, f: usize) -> Vec<usize> {
        self.darts[f].iter().map(|&d| tail(g, d as usize)).collect()
    }
}

fn tail(g: &MultiGraph, d: usize) -> usize {
    let (a, b) = g.edge(d / 2);
    if d % 2 == 0 {
        a
    } else {
        b
    }
}

fn head(g: &MultiGraph, d: usize) -> usize {
    tail(g, d ^ 1)
}

/// Traces all faces of a 2-d labelled embedding.
pub fn trace_faces(g: &MultiGraph) -> Result<Faces> {
    if g.dimension() != 2 || !g.has_labels() {
        return Err(Error::NotPlanar("needs a 2-d embedding with axis labels".into()));
    }
    let nd = 2 * g.edge_count();
    let mut out = vec![[NONE; 4]; g.vertex_count()];
    let mut dir = vec![0u8; nd];
    for e in 0..g.edge_count() {
        let l = g.label(e).unwrap();
        if l > 1 {
            return Err(Error::NotPlanar(format!("edge {e} has axis label {l}")));
        }
        for (d, t) in [(2 * e, l), (2 * e + 1, l + 2)] {
            dir[d] = t;
            let slot = &mut out[tail(g, d)][t as usize];
            if *slot != NONE {
                return Err(Error::NotPlanar(format!("two darts leave vertex {} in one direction", tail(g, d))));
            }
            *slot = d as u32;
        }
    }
    let next = |d: usize| -> usize {
        let h = head(g, d);
        let r = (dir[d] as usize + 2) % 4;
        (1..=4)
            .map(|k| out[h][(r + 4 - k) % 4])
            .find(|&x| x != NONE)
            .unwrap() as usize
    };
    let mut face_of_dart = vec![NONE; nd];
    let mut darts = Vec::new();
    for start in 0..nd {
        if face_of_dart[start] != NONE {
            continue;
        }
        let f = darts.len() as u32;
        let mut cycle = Vec::new();
        let mut d = start;
        while face_of_dart[d] == NONE {
            face_of_dart[d] = f;
            cycle.push(d as u32);
            d = next(d);
        }
        darts.push(cycle);
    }
    let periodic = matches!(g.kind(), GraphKind::Torus { .. } | GraphKind::HexTorus { .. });
    let outer = if periodic || darts.is_empty() || !g.has_embedding() {
        None
    } else {
        let area = |f: &Vec<u32>| -> i64 {
            f.iter()
                .map(|&d| {
                    let p = g.coords(tail(g, d as usize)).unwrap();
                    let q = g.coords(head(g, d as usize)).unwrap();
                    p[0] * q[1] - q[0] * p[1]
                })
                .sum()
        };
        (0..darts.len()).min_by_key(|&f| area(&darts[f]))
    };
    Ok(Faces {
        face_of_dart,
        darts,
        outer,
    })
}

/// The dual multigraph: one vertex per face, and dual edge `e` joins the faces
/// on either side of primal edge `e`.
#[derive(Clone, Debug)]
pub struct PlanarDual {
    pub graph: MultiGraph,
    pub faces: Faces,
}

impl PlanarDual {
    pub fn outer_face(&self) -> Option<usize> {
        self.faces.outer
    }
}

/// Builds the dual of a connected planar patch (or of a torus embedding).
pub fn dual_graph(g: &MultiGraph) -> Result<PlanarDual> {
    let faces = trace_faces(g)?;
    if faces.outer.is_some() {
        let euler = g.vertex_count() as i64 - g.edge_count() as i64 + faces.count() as i64;
        if euler != 2 {
            return Err(Error::NotPlanar(format!("Euler characteristic {euler}; graph is disconnected")));
        }
    }
    let edges: Vec<(usize, usize)> = (0..g.edge_count())
        .map(|e| (faces.face_of_dart(2 * e), faces.face_of_dart(2 * e + 1)))
        .collect();
    let graph = MultiGraph::from_edges(faces.count(), &edges)?;
    let graph = match faces.outer {
        Some(o) => graph.with_boundary(vec![o])?,
        None => graph,
    };
    Ok(PlanarDual { graph, faces })
}

/// Primal edges whose two sides carry opposite face spins.
pub fn interfaces(dual: &PlanarDual, spins: &SpinConfig) -> Result<EdgeConfig> {
    if spins.len() != dual.graph.vertex_count() {
        return Err(Error::Mismatch(format!(
            "{} face spins for {} faces",
            spins.len(),
            dual.graph.vertex_count()
        )));
    }
    Ok(EdgeConfig::from_indices(
        dual.graph.edge_count(),
        dual.graph
            .edges()
            .enumerate()
            .filter(|&(_, (f, h))| spins.spin(f) != spins.spin(h))
            .map(|(e, _)| e),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_box, build_hexagonal_patch, build_hexagonal_torus, build_torus};

    fn euler(g: &MultiGraph) -> i64 {
        let f = trace_faces(g).unwrap();
        g.vertex_count() as i64 - g.edge_count() as i64 + f.count() as i64
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler(&build_box(2, 1).unwrap()), 2);
        assert_eq!(euler(&build_box(2, 3).unwrap()), 2);
        assert_eq!(euler(&build_hexagonal_patch(7, 4).unwrap()), 2);
        assert_eq!(euler(&build_torus(2, 2).unwrap()), 0);
        assert_eq!(euler(&build_torus(2, 1).unwrap()), 0);
        for k in 1..4 {
            assert_eq!(euler(&build_hexagonal_torus(k).unwrap()), 0);
        }
    }

    #[test]
    fn hexagonal_torus_faces_are_hexagons() {
        let g = build_hexagonal_torus(2).unwrap();
        let f = trace_faces(&g).unwrap();
        assert_eq!(f.count(), g.vertex_count() / 2);
        assert!((0..f.count()).all(|i| f.darts(i).len() == 6));
    }

    #[test]
    fn outer_face_of_a_grid() {
        let g = build_box(2, 1).unwrap();
        let d = dual_graph(&g).unwrap();
        let outer = d.outer_face().unwrap();
        assert_eq!(d.faces.darts(outer).len(), 8);
        assert_eq!(d.graph.degree(outer), 8);
        for f in (0..d.faces.count()).filter(|&f| f != outer) {
            assert_eq!(d.faces.darts(f).len(), 4);
        }
    }

    #[test]
    fn interfaces_of_one_minus_face() {
        let g = build_hexagonal_patch(5, 3).unwrap();
        let d = dual_graph(&g).unwrap();
        let plus = SpinConfig::all_plus(d.graph.vertex_count());
        assert!(interfaces(&d, &plus).unwrap().is_empty());
        let inner = (0..d.faces.count()).find(|&f| Some(f) != d.outer_face()).unwrap();
        let mut s = plus.clone();
        s.set_spin(inner, -1);
        let i = interfaces(&d, &s).unwrap();
        let boundary: Vec<usize> = d.faces.darts(inner).iter().map(|&x| x as usize / 2).collect();
        assert_eq!(i, EdgeConfig::from_indices(g.edge_count(), boundary));
        assert_eq!(i.count(), 6);
    }
}
