//! Finite lattices as multigraphs: boxes, tori, hexagonal patches and tori,
//! slabs and sheets, cut-open lattices, boundary conditions and quotients.
//!
//! Every builder assigns edge indices deterministically. Hypercubic edges are
//! ordered by (lower endpoint, direction), where the lower endpoint is the one
//! the edge leaves in the positive direction, and vertices are ordered
//! lexicographically with the first axis most significant. The edge label is
//! the lattice direction (axis index), and an edge `(a, b)` always points from
//! `a` to `b` in the positive sense of its axis.
//!
//! The hexagonal lattice is drawn as a brick wall on `Z^2`: all horizontal
//! edges are present and the vertical edge above `(i, j)` exists iff `i + j`
//! is even.

use serde::{Deserialize, Serialize};

use crate::bits::EdgeConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphKind {
    Generic,
    Box { d: usize, n: usize },
    Torus { d: usize, n: usize },
    HexPatch { width: usize, height: usize },
    HexTorus { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<[u32; 2]>,
    dimension: usize,
    coords: Option<Vec<i64>>,
    labels: Option<Vec<u8>>,
    boundary: Vec<usize>,
    kind: GraphKind,
    adj: Vec<Vec<(u32, u32)>>,
}

fn check_width(what: &str, n: u128) -> Result<usize> {
    if n > u32::MAX as u128 {
        Err(Error::Overflow(format!("{what} = {n}")))
    } else {
        Ok(n as usize)
    }
}

impl MultiGraph {
    /// A bare multigraph without embedding, labels or boundary.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_width("vertex count", vertex_count as u128)?;
        check_width("edge count", edges.len() as u128)?;
        let mut es = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) on {vertex_count} vertices"
                )));
            }
            es.push([a as u32, b as u32]);
        }
        Ok(Self::assemble(vertex_count, es, 0, None, None, Vec::new(), GraphKind::Generic))
    }

    /// The cycle `C_k` (`k ≥ 1`; `k = 1` is a self-loop, `k = 2` a double edge).
    pub fn cycle(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("empty cycle".into()));
        }
        let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::from_edges(k, &edges)
    }

    /// The path on `k` vertices, with its two endpoints as boundary.
    pub fn path(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("empty path".into()));
        }
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        let mut b = vec![0, k - 1];
        b.dedup();
        Self::from_edges(k, &edges)?.with_boundary(b)
    }

    /// Replaces the designated boundary vertex set.
    pub fn with_boundary(mut self, mut boundary: Vec<usize>) -> Result<Self> {
        boundary.sort_unstable();
        boundary.dedup();
        if boundary.iter().any(|&v| v >= self.vertex_count) {
            return Err(Error::InvalidBoundary("boundary vertex out of range".into()));
        }
        self.boundary = boundary;
        Ok(self)
    }

    fn assemble(
        vertex_count: usize,
        edges: Vec<[u32; 2]>,
        dimension: usize,
        coords: Option<Vec<i64>>,
        labels: Option<Vec<u8>>,
        boundary: Vec<usize>,
        kind: GraphKind,
    ) -> Self {
        let mut adj = vec![Vec::new(); vertex_count];
        for (e, &[a, b]) in edges.iter().enumerate() {
            adj[a as usize].push((e as u32, b));
            if a != b {
                adj[b as usize].push((e as u32, a));
            }
        }
        Self {
            vertex_count,
            edges,
            dimension,
            coords,
            labels,
            boundary,
            kind,
            adj,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        let [a, b] = self.edges[e];
        (a as usize, b as usize)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&[a, b]| (a as usize, b as usize))
    }

    pub fn label(&self, e: usize) -> Option<u8> {
        self.labels.as_ref().map(|l| l[e])
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Coordinate dimension of the embedding (0 when there is none).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn coords(&self, v: usize) -> Option<&[i64]> {
        let d = self.dimension;
        self.coords.as_ref().map(|c| &c[v * d..(v + 1) * d])
    }

    pub fn has_embedding(&self) -> bool {
        self.coords.is_some()
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GraphKind::Torus { .. })
    }

    /// Coordinate periods of periodic hosts.
    pub fn periods(&self) -> Option<Vec<i64>> {
        match self.kind {
            GraphKind::Torus { d, n } => Some(vec![2 * n as i64; d]),
            _ => None,
        }
    }

    /// Incident `(edge, other endpoint)` pairs in edge-index order. A
    /// self-loop is listed once.
    pub fn incident(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[v]
    }

    /// Degree with multiplicity; a self-loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v]
            .iter()
            .map(|&(_, w)| if w as usize == v { 2 } else { 1 })
            .sum()
    }

    pub fn find_vertex(&self, coord: &[i64]) -> Option<usize> {
        if coord.len() != self.dimension || self.coords.is_none() {
            return None;
        }
        match &self.kind {
            GraphKind::Box { d, n } => {
                let side = 2 * *n as i64 + 1;
                let mut idx = 0i64;
                for &x in coord.iter().take(*d) {
                    if x.abs() > *n as i64 {
                        return None;
                    }
                    idx = idx * side + x + *n as i64;
                }
                Some(idx as usize)
            }
            GraphKind::Torus { n, .. } => {
                let side = 2 * *n as i64;
                let mut idx = 0i64;
                for &x in coord {
                    idx = idx * side + x.rem_euclid(side);
                }
                Some(idx as usize)
            }
            _ => (0..self.vertex_count).find(|&v| self.coords(v) == Some(coord)),
        }
    }

    /// First edge joining `a` and `b` (in either orientation).
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a]
            .iter()
            .find(|&&(_, w)| w as usize == b)
            .map(|&(e, _)| e as usize)
    }

    /// Edge indices of `self` for each edge of `sub`, matched by endpoint
    /// coordinates and label. Both graphs need an embedding.
    pub fn embed_edges(&self, sub: &MultiGraph) -> Result<Vec<usize>> {
        if !self.has_embedding() || !sub.has_embedding() || self.dimension != sub.dimension {
            return Err(Error::Mismatch("both graphs need embeddings of equal dimension".into()));
        }
        let mut out = Vec::with_capacity(sub.edge_count());
        for (e, (a, b)) in sub.edges().enumerate() {
            let va = self.find_vertex(sub.coords(a).unwrap());
            let vb = self.find_vertex(sub.coords(b).unwrap());
            let (Some(va), Some(vb)) = (va, vb) else {
                return Err(Error::Mismatch(format!("edge {e} of the subgraph has no image")));
            };
            let hit = self.adj[va].iter().find(|&&(f, w)| {
                w as usize == vb && self.edges[f as usize][0] as usize == va && self.label(f as usize) == sub.label(e)
            });
            match hit {
                Some(&(f, _)) => out.push(f as usize),
                None => return Err(Error::Mismatch(format!("edge {e} of the subgraph has no image"))),
            }
        }
        Ok(out)
    }

    /// Number of connected components of `(V, E)`, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = crate::unionfind::DisjointSet::new(self.vertex_count);
        for (a, b) in self.edges() {
            uf.union(a, b);
        }
        uf.components()
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            dimension: self.dimension,
            vertices: (0..self.vertex_count)
                .map(|v| self.coords(v).map(|c| c.to_vec()).unwrap_or_default())
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, &[a, b])| (a as usize, b as usize, self.label(e)))
                .collect(),
        };
        serde_json::to_string(&doc).expect("graph serialises")
    }

    /// Reads the JSON document written by [`MultiGraph::to_json`]. The result
    /// is a generic graph: builder-specific metadata is not stored.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let n = doc.vertices.len();
        let pairs: Vec<(usize, usize)> = doc.edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let mut g = Self::from_edges(n, &pairs)?;
        if doc.dimension > 0 {
            if doc.vertices.iter().any(|c| c.len() != doc.dimension) {
                return Err(Error::InvalidArgument("coordinate of wrong dimension".into()));
            }
            g.dimension = doc.dimension;
            g.coords = Some(doc.vertices.concat());
        }
        if doc.edges.iter().all(|e| e.2.is_some()) && !doc.edges.is_empty() {
            g.labels = Some(doc.edges.iter().map(|e| e.2.unwrap()).collect());
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    dimension: usize,
    vertices: Vec<Vec<i64>>,
    edges: Vec<(usize, usize, Option<u8>)>,
}

fn lex_coords(d: usize, side: i64, offset: i64, count: usize) -> Vec<i64> {
    let mut coords = Vec::with_capacity(count * d);
    for v in 0..count {
        let mut rem = v as i64;
        let start = coords.len();
        coords.resize(start + d, 0);
        for axis in (0..d).rev() {
            coords[start + axis] = rem % side - offset;
            rem /= side;
        }
    }
    coords
}

/// The box `Λ_n = [−n, n]^d ∩ Z^d` with its geometric faces as boundary.
pub fn build_box(d: usize, n: usize) -> Result<MultiGraph> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let side = 2 * n as u128 + 1;
    let count = side
        .checked_pow(d as u32)
        .ok_or_else(|| Error::Overflow(format!("(2n+1)^d with n={n}, d={d}")))?;
    let count = check_width("vertex count", count)?;
    let edge_count = (d as u128) * (side - 1) * (count as u128 / side);
    check_width("edge count", edge_count)?;
    let side = side as i64;
    let coords = lex_coords(d, side, n as i64, count);
    let mut edges = Vec::with_capacity(edge_count as usize);
    let mut labels = Vec::with_capacity(edge_count as usize);
    let mut stride = vec![1i64; d];
    for axis in (0..d.saturating_sub(1)).rev() {
        stride[axis] = stride[axis + 1] * side;
    }
    let mut boundary = Vec::new();
    for v in 0..count {
        let c = &coords[v * d..(v + 1) * d];
        if c.iter().any(|x| x.unsigned_abs() as usize == n) {
            boundary.push(v);
        }
        for axis in 0..d {
            if c[axis] < n as i64 {
                edges.push([v as u32, (v as i64 + stride[axis]) as u32]);
                labels.push(axis as u8);
            }
        }
    }
    Ok(MultiGraph::assemble(
        count,
        edges,
        d,
        Some(coords),
        Some(labels),
        boundary,
        GraphKind::Box { d, n },
    ))
}

/// The torus `T_n^d = Λ_n / 2nZ^d` with coordinates in `[0, 2n)^d`. For
/// `n = 1` parallel edges arise and are kept.
pub fn build_torus(d: usize, n: usize) -> Result<MultiGraph> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("torus needs d ≥ 1 and n ≥ 1".into()));
    }
    let side = 2 * n as u128;
    let count = side
        .checked_pow(d as u32)
        .ok_or_else(|| Error::Overflow(format!("(2n)^d with n={n}, d={d}")))?;
    let count = check_width("vertex count", count)?;
    check_width("edge count", d as u128 * count as u128)?;
    let side = side as i64;
    let coords = lex_coords(d, side, 0, count);
    let mut edges = Vec::with_capacity(d * count);
    let mut labels = Vec::with_capacity(d * count);
    let mut stride = vec![1i64; d];
    for axis in (0..d.saturating_sub(1)).rev() {
        stride[axis] = stride[axis + 1] * side;
    }
    for v in 0..count {
        let c = &coords[v * d..(v + 1) * d];
        for axis in 0..d {
            let w = if c[axis] == side - 1 {
                v as i64 - (side - 1) * stride[axis]
            } else {
                v as i64 + stride[axis]
            };
            edges.push([v as u32, w as u32]);
            labels.push(axis as u8);
        }
    }
    Ok(MultiGraph::assemble(
        count,
        edges,
        d,
        Some(coords),
        Some(labels),
        Vec::new(),
        GraphKind::Torus { d, n },
    ))
}

fn brick_vertical(i: i64, j: i64) -> bool {
    (i + j).rem_euclid(2) == 0
}

/// A `width × height` brick-wall patch of the hexagonal lattice. The boundary
/// is the set of vertices on the outer face. `(3, 2)` is a single hexagon.
pub fn build_hexagonal_patch(width: usize, height: usize) -> Result<MultiGraph> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument("empty hexagonal patch".into()));
    }
    let count = check_width("vertex count", width as u128 * height as u128)?;
    let (w, h) = (width as i64, height as i64);
    let coords: Vec<i64> = (0..count as i64).flat_map(|v| [v / h, v % h]).collect();
    let idx = |i: i64, j: i64| (i * h + j) as u32;
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for i in 0..w {
        for j in 0..h {
            if i + 1 < w {
                edges.push([idx(i, j), idx(i + 1, j)]);
                labels.push(0);
            }
            if j + 1 < h && brick_vertical(i, j) {
                edges.push([idx(i, j), idx(i, j + 1)]);
                labels.push(1);
            }
        }
    }
    let mut g = MultiGraph::assemble(
        count,
        edges,
        2,
        Some(coords),
        Some(labels),
        Vec::new(),
        GraphKind::HexPatch { width, height },
    );
    let faces = crate::planar::trace_faces(&g)?;
    if let Some(outer) = faces.outer_face() {
        let mut b: Vec<usize> = faces.face_vertices(&g, outer);
        b.sort_unstable();
        b.dedup();
        g.boundary = b;
    }
    Ok(g)
}

/// Periodic brick-wall hexagonal lattice with `8k²` vertices and `12k²` edges:
/// width `4k`, height `2k`, and the vertical period shifted by `2k` columns so
/// that the fundamental domain is the tilted rhombus of the triangular
/// lattice. Trivalent.
pub fn build_hexagonal_torus(k: usize) -> Result<MultiGraph> {
    if k == 0 {
        return Err(Error::InvalidArgument("hexagonal torus needs k ≥ 1".into()));
    }
    let (w, h) = (4 * k as i64, 2 * k as i64);
    let count = check_width("vertex count", (w * h) as u128)?;
    let coords: Vec<i64> = (0..count as i64).flat_map(|v| [v / h, v % h]).collect();
    let idx = |i: i64, j: i64| (i.rem_euclid(w) * h + j) as u32;
    let mut edges = Vec::with_capacity(3 * count / 2);
    let mut labels = Vec::with_capacity(3 * count / 2);
    for i in 0..w {
        for j in 0..h {
            edges.push([idx(i, j), idx(i + 1, j)]);
            labels.push(0);
            if brick_vertical(i, j) {
                let up = if j + 1 < h { idx(i, j + 1) } else { idx(i - h, 0) };
                edges.push([idx(i, j), up]);
                labels.push(1);
            }
        }
    }
    Ok(MultiGraph::assemble(
        count,
        edges,
        2,
        Some(coords),
        Some(labels),
        Vec::new(),
        GraphKind::HexTorus { k },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "kebab-case")]
pub enum SlabKind {
    /// Edges of `Λ_n` lying in `{x_d = 0}`; needs `d ≥ 3`.
    HyperplaneSheet,
    /// Edges of `Λ_n` with both endpoints in `{x_d ∈ {0, 1}}`; needs `n ≥ 1`.
    TwoLayerSlab,
}

/// The host box `Λ_n` and the designated sheet or slab as an edge subset.
pub fn build_slab_sheet(kind: SlabKind, d: usize, n: usize) -> Result<(MultiGraph, EdgeConfig)> {
    match kind {
        SlabKind::HyperplaneSheet if d < 3 => {
            return Err(Error::InvalidArgument("a hyperplane sheet needs d ≥ 3".into()))
        }
        SlabKind::TwoLayerSlab if d < 2 || n == 0 => {
            return Err(Error::InvalidArgument("a two-layer slab needs d ≥ 2 and n ≥ 1".into()))
        }
        _ => {}
    }
    let g = build_box(d, n)?;
    let last = |v: usize| g.coords(v).unwrap()[d - 1];
    let keep = |a: usize, b: usize| match kind {
        SlabKind::HyperplaneSheet => last(a) == 0 && last(b) == 0,
        SlabKind::TwoLayerSlab => (0..=1).contains(&last(a)) && (0..=1).contains(&last(b)),
    };
    let sub = EdgeConfig::from_indices(
        g.edge_count(),
        g.edges().enumerate().filter(|&(_, (a, b))| keep(a, b)).map(|(e, _)| e),
    );
    Ok((g, sub))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "kebab-case")]
pub enum CutBase {
    /// `Λ_n ⊂ Z^d`, cut along the axis-0 edges leaving `{x_0 = 0}`.
    Box { d: usize },
    /// The brick patch `(2n + 3) × (2n + 2)`, cut along the horizontal edges
    /// leaving column `n + 1`.
    Hexagonal,
}

/// Removes the cut hyperplane's edges except the one whose lower endpoint has
/// coordinates `kept`. `None` removes them all. Surviving edges keep their
/// relative order.
pub fn build_cut_lattice(base: CutBase, n: usize, kept: Option<&[i64]>) -> Result<MultiGraph> {
    let (g, col) = match base {
        CutBase::Box { d } => (build_box(d, n)?, 0i64),
        CutBase::Hexagonal => (build_hexagonal_patch(2 * n + 3, 2 * n + 2)?, n as i64 + 1),
    };
    let on_cut = |e: usize| g.label(e) == Some(0) && g.coords(g.edge(e).0).unwrap()[0] == col;
    let kept_edge = match kept {
        None => None,
        Some(c) => {
            let e = (0..g.edge_count())
                .find(|&e| on_cut(e) && g.coords(g.edge(e).0) == Some(c))
                .ok_or_else(|| Error::InvalidArgument(format!("no cut edge with lower endpoint {c:?}")))?;
            Some(e)
        }
    };
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for e in 0..g.edge_count() {
        if !on_cut(e) || Some(e) == kept_edge {
            edges.push(g.edges[e]);
            labels.push(g.label(e).unwrap());
        }
    }
    Ok(MultiGraph::assemble(
        g.vertex_count,
        edges,
        g.dimension,
        g.coords.clone(),
        Some(labels),
        g.boundary.clone(),
        GraphKind::Generic,
    ))
}

/// A partition of the designated boundary vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    vertices: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl BoundaryCondition {
    /// All boundary vertices in singleton classes.
    pub fn free(g: &MultiGraph) -> Self {
        Self {
            vertices: g.boundary.clone(),
            classes: g.boundary.iter().map(|&v| vec![v]).collect(),
        }
    }

    /// All boundary vertices in one class.
    pub fn wired(g: &MultiGraph) -> Self {
        Self {
            vertices: g.boundary.clone(),
            classes: if g.boundary.is_empty() {
                Vec::new()
            } else {
                vec![g.boundary.clone()]
            },
        }
    }

    pub fn new(g: &MultiGraph, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if classes.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidBoundary("empty class".into()));
        }
        classes.sort();
        let mut all: Vec<usize> = classes.concat();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBoundary("classes overlap".into()));
        }
        if all != g.boundary {
            return Err(Error::InvalidBoundary("classes do not cover the boundary exactly".into()));
        }
        Ok(Self { vertices: all, classes })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn is_free(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    pub fn is_wired(&self) -> bool {
        self.classes.len() <= 1
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn is_finer_than(&self, other: &Self) -> bool {
        if self.vertices != other.vertices {
            return false;
        }
        self.classes.iter().all(|c| {
            other
                .classes
                .iter()
                .any(|o| c.iter().all(|v| o.binary_search(v).is_ok()))
        })
    }

    fn check(&self, g: &MultiGraph) -> Result<()> {
        if self.vertices != g.boundary {
            return Err(Error::InvalidBoundary("boundary condition belongs to another graph".into()));
        }
        Ok(())
    }
}

/// A quotient multigraph. Edge `e` of the quotient is the image of edge `e`
/// of the original graph.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: MultiGraph,
    /// Image of each original vertex.
    pub vertex_map: Vec<usize>,
}

/// Merges each class of `bc` into a single vertex. Vertices are renumbered in
/// order of their smallest preimage. A free condition returns the graph
/// unchanged, metadata included.
pub fn quotient(g: &MultiGraph, bc: &BoundaryCondition) -> Result<Quotient> {
    bc.check(g)?;
    if bc.is_free() {
        return Ok(Quotient {
            graph: g.clone(),
            vertex_map: (0..g.vertex_count).collect(),
        });
    }
    let mut rep: Vec<usize> = (0..g.vertex_count).collect();
    for c in &bc.classes {
        for &v in c {
            rep[v] = c[0];
        }
    }
    let mut new_index = vec![usize::MAX; g.vertex_count];
    let mut next = 0;
    for v in 0..g.vertex_count {
        if rep[v] == v {
            new_index[v] = next;
            next += 1;
        }
    }
    let vertex_map: Vec<usize> = (0..g.vertex_count).map(|v| new_index[rep[v]]).collect();
    let edges = g
        .edges
        .iter()
        .map(|&[a, b]| [vertex_map[a as usize] as u32, vertex_map[b as usize] as u32])
        .collect();
    let mut boundary: Vec<usize> = bc.vertices.iter().map(|&v| vertex_map[v]).collect();
    boundary.dedup();
    let graph = MultiGraph::assemble(next, edges, 0, None, g.labels.clone(), boundary, GraphKind::Generic);
    Ok(Quotient { graph, vertex_map })
}

/// The outgoing and incoming axis-0 edges at a hyperplane `{x_0 = level}` of a
/// torus. Outgoing edges leave the hyperplane towards `level + 1`; incoming
/// ones arrive from `level − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub direction: usize,
    pub level: i64,
    pub outgoing: Vec<usize>,
    pub incoming: Vec<usize>,
    outgoing_set: EdgeConfig,
}

impl Hyperplane {
    pub fn outgoing_set(&self) -> &EdgeConfig {
        &self.outgoing_set
    }

    pub fn is_outgoing(&self, e: usize) -> bool {
        self.outgoing_set.contains(e)
    }
}

/// The hyperplane orthogonal to axis 0 at `level` (taken modulo the period).
pub fn hyperplane(g: &MultiGraph, level: i64) -> Result<Hyperplane> {
    let GraphKind::Torus { n, .. } = g.kind else {
        return Err(Error::NotTorus);
    };
    if g.labels.is_none() {
        return Err(Error::MissingLabels);
    }
    let period = 2 * n as i64;
    let level = level.rem_euclid(period);
    let below = (level - 1).rem_euclid(period);
    let mut outgoing = Vec::new();
    let mut incoming = Vec::new();
    for (e, (a, _)) in g.edges().enumerate() {
        if g.label(e) != Some(0) {
            continue;
        }
        let x = g.coords(a).unwrap()[0];
        if x == level {
            outgoing.push(e);
        } else if x == below && period > 1 {
            incoming.push(e);
        }
    }
    let outgoing_set = EdgeConfig::from_indices(g.edge_count(), outgoing.iter().copied());
    Ok(Hyperplane {
        direction: 0,
        level,
        outgoing,
        incoming,
        outgoing_set,
    })
}

/// `ℓ∞` distance between two vertices, periodic on tori.
pub fn linf_distance(g: &MultiGraph, u: usize, v: usize) -> Option<i64> {
    let (a, b) = (g.coords(u)?, g.coords(v)?);
    let periods = g.periods();
    Some(
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| {
                let d = (x - y).abs();
                match &periods {
                    Some(p) => d.min(p[i] - d),
                    None => d,
                }
            })
            .max()
            .unwrap_or(0),
    )
}
