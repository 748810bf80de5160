//! The cycle space over GF(2): source map, even subgraphs, fundamental cycle
//! bases, exact counting and uniform sampling.

use rand::Rng;

use crate::bits::{EdgeConfig, SourceSet};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::lattice::{quotient, BoundaryCondition, MultiGraph};
use crate::unionfind::DisjointSet;

const NONE: u32 = u32::MAX;

/// Rank cap for exact marginals.
pub const MARGINAL_RANK_CAP: usize = 30;

/// Vertices of odd degree in `c`. A self-loop adds 2 to the degree.
pub fn source_map(g: &MultiGraph, c: &EdgeConfig) -> SourceSet {
    let mut s = SourceSet::empty(g.vertex_count());
    for e in c.iter() {
        let (a, b) = g.edge(e);
        if a != b {
            s.toggle(a);
            s.toggle(b);
        }
    }
    s
}

/// Whether `c` has no sources once the classes of `bc` are merged.
pub fn is_even(g: &MultiGraph, c: &EdgeConfig, bc: Option<&BoundaryCondition>) -> Result<bool> {
    match bc {
        Some(bc) if !bc.is_free() => {
            let q = quotient(g, bc)?;
            Ok(source_map(&q.graph, c).is_empty())
        }
        Some(bc) => {
            quotient(g, bc)?;
            Ok(source_map(g, c).is_empty())
        }
        None => Ok(source_map(g, c).is_empty()),
    }
}

/// `κ(c) + o(c) − |V|`: the even subgraphs of the open graph number `2^` this.
pub fn count_even(g: &MultiGraph, c: &EdgeConfig) -> usize {
    let mut uf = DisjointSet::new(g.vertex_count());
    for e in c.iter() {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    uf.components() + c.count() - g.vertex_count()
}

/// BFS spanning forest of the open subgraph. Roots are taken in increasing
/// vertex order and incident edges are scanned in index order.
struct Forest {
    order: Vec<u32>,
    parent_edge: Vec<u32>,
    parent: Vec<u32>,
}

fn bfs_forest(g: &MultiGraph, c: &EdgeConfig) -> Forest {
    let n = g.vertex_count();
    let mut f = Forest {
        order: Vec::with_capacity(n),
        parent_edge: vec![NONE; n],
        parent: vec![NONE; n],
    };
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut head = f.order.len();
        f.order.push(root as u32);
        while head < f.order.len() {
            let v = f.order[head] as usize;
            head += 1;
            for &(e, w) in g.incident(v) {
                if !seen[w as usize] && c.contains(e as usize) {
                    seen[w as usize] = true;
                    f.parent_edge[w as usize] = e;
                    f.parent[w as usize] = v as u32;
                    f.order.push(w);
                }
            }
        }
    }
    f
}

/// Fundamental cycle basis of an open subgraph.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub forest: EdgeConfig,
    /// Generator `i` is the fundamental cycle of `non_forest[i]`.
    pub generators: Vec<EdgeConfig>,
    pub non_forest: Vec<usize>,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

pub fn cycle_basis(g: &MultiGraph) -> CycleBasis {
    cycle_basis_of(g, &EdgeConfig::full(g.edge_count()))
}

/// Cycle basis of the subgraph `(V, E_c)`.
pub fn cycle_basis_of(g: &MultiGraph, c: &EdgeConfig) -> CycleBasis {
    let f = bfs_forest(g, c);
    let m = g.edge_count();
    let forest = EdgeConfig::from_indices(m, f.parent_edge.iter().filter(|&&e| e != NONE).map(|&e| e as usize));
    let mut generators = Vec::new();
    let mut non_forest = Vec::new();
    for e in c.iter() {
        if forest.contains(e) {
            continue;
        }
        let mut gen = EdgeConfig::empty(m);
        gen.set(e, true);
        let (a, b) = g.edge(e);
        for mut v in [a, b] {
            while f.parent_edge[v] != NONE {
                gen.toggle(f.parent_edge[v] as usize);
                v = f.parent[v] as usize;
            }
        }
        generators.push(gen);
        non_forest.push(e);
    }
    CycleBasis {
        forest,
        generators,
        non_forest,
    }
}

struct CoinBuffer {
    word: u64,
    left: u32,
}

impl CoinBuffer {
    fn new() -> Self {
        Self { word: 0, left: 0 }
    }

    fn flip<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        if self.left == 0 {
            self.word = rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }
}

/// Uniform even subgraph of `(V, E_c)`.
///
/// Equivalent to XOR-ing each fundamental cycle of [`cycle_basis_of`] with
/// probability ½: coins are drawn for the non-forest edges in index order and
/// the forest edges are then fixed, leaves first, by the parity constraint.
pub fn sample_ueg<R: Rng + ?Sized>(g: &MultiGraph, c: &EdgeConfig, rng: &mut R) -> EdgeConfig {
    let f = bfs_forest(g, c);
    let mut out = EdgeConfig::empty(g.edge_count());
    let mut odd = vec![false; g.vertex_count()];
    let mut coins = CoinBuffer::new();
    for e in c.iter() {
        let (a, b) = g.edge(e);
        if f.parent_edge[b] == e as u32 || f.parent_edge[a] == e as u32 {
            continue;
        }
        if coins.flip(rng) {
            out.set(e, true);
            odd[a] ^= true;
            odd[b] ^= true;
        }
    }
    for &v in f.order.iter().rev() {
        let v = v as usize;
        if odd[v] && f.parent_edge[v] != NONE {
            out.set(f.parent_edge[v] as usize, true);
            odd[v] = false;
            odd[f.parent[v] as usize] ^= true;
        }
    }
    out
}

/// Uniform element of the even subgraphs of `g` with boundary condition `bc`.
pub fn sample_wired_ueg<R: Rng + ?Sized>(g: &MultiGraph, bc: &BoundaryCondition, rng: &mut R) -> Result<EdgeConfig> {
    let q = quotient(g, bc)?;
    Ok(sample_ueg(&q.graph, &EdgeConfig::full(g.edge_count()), rng))
}

/// What the uniform even subgraph is taken over.
#[derive(Clone, Copy, Debug)]
pub enum Ambient<'a> {
    /// All edges of the host, free boundary.
    Full,
    /// All edges of the host, boundary classes merged.
    Boundary(&'a BoundaryCondition),
    /// The open edges of a configuration.
    Config(&'a EdgeConfig),
}

/// Generators of the relevant even group, as configurations of the host.
pub fn ambient_basis(g: &MultiGraph, ambient: Ambient<'_>) -> Result<CycleBasis> {
    Ok(match ambient {
        Ambient::Full => cycle_basis(g),
        Ambient::Boundary(bc) => cycle_basis(&quotient(g, bc)?.graph),
        Ambient::Config(c) => cycle_basis_of(g, c),
    })
}

/// Row-reduces `vectors` over GF(2) and returns a basis of their span.
pub fn gf2_span_basis(vectors: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// All `2^r` elements of the span of `basis`, in Gray-code order.
pub fn gf2_span_elements(basis: &[u64]) -> Vec<u64> {
    let r = basis.len();
    let mut out = Vec::with_capacity(1 << r);
    let mut x = 0u64;
    out.push(x);
    for i in 1u64..(1u64 << r) {
        x ^= basis[i.trailing_zeros() as usize];
        out.push(x);
    }
    out
}

/// Exact law of the uniform even subgraph restricted to the edges `sub`
/// (bit `i` of each outcome is edge `sub[i]`).
///
/// The restriction map is a group homomorphism, so the marginal is uniform on
/// its image; the image is found by row reduction of the projected
/// generators. The rank cap applies to the image.
pub fn marginal_ueg_exact(g: &MultiGraph, sub: &[usize], ambient: Ambient<'_>) -> Result<Distribution> {
    if sub.len() > 64 {
        return Err(Error::CapExceeded {
            what: "marginal edge count",
            actual: sub.len(),
            limit: 64,
        });
    }
    if let Some(&e) = sub.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Error::InvalidArgument(format!("edge {e} not in host")));
    }
    let basis = ambient_basis(g, ambient)?;
    let projected = basis.generators.iter().map(|gen| {
        sub.iter()
            .enumerate()
            .fold(0u64, |m, (i, &e)| m | ((gen.contains(e) as u64) << i))
    });
    let image = gf2_span_basis(projected);
    if image.len() > MARGINAL_RANK_CAP {
        return Err(Error::CapExceeded {
            what: "image rank",
            actual: image.len(),
            limit: MARGINAL_RANK_CAP,
        });
    }
    Distribution::uniform(sub.len(), gf2_span_elements(&image))
}

/// All even subgraphs of `(V, E_c)` as edge masks. Needs `|E| ≤ 64`.
pub fn even_subgraphs(g: &MultiGraph, c: &EdgeConfig, rank_cap: usize) -> Result<Vec<u64>> {
    if g.edge_count() > 64 {
        return Err(Error::CapExceeded {
            what: "edge count",
            actual: g.edge_count(),
            limit: 64,
        });
    }
    let basis = cycle_basis_of(g, c);
    if basis.rank() > rank_cap {
        return Err(Error::CapExceeded {
            what: "cycle rank",
            actual: basis.rank(),
            limit: rank_cap,
        });
    }
    let gens: Vec<u64> = basis.generators.iter().map(|x| x.to_mask()).collect();
    Ok(gf2_span_elements(&gens))
}

/// Whether `m` is a perfect matching of `g` (no self-loops).
pub fn check_perfect_matching(g: &MultiGraph, m: &EdgeConfig) -> Result<()> {
    if m.len() != g.edge_count() {
        return Err(Error::NotPerfectMatching("wrong length".into()));
    }
    let mut deg = vec![0u32; g.vertex_count()];
    for e in m.iter() {
        let (a, b) = g.edge(e);
        if a == b {
            return Err(Error::NotPerfectMatching(format!("self-loop {e}")));
        }
        deg[a] += 1;
        deg[b] += 1;
    }
    if let Some(v) = deg.iter().position(|&d| d != 1) {
        return Err(Error::NotPerfectMatching(format!("vertex {v} is covered {} times", deg[v])));
    }
    Ok(())
}

/// Uniform odd subgraph: a fixed dimerisation XOR a uniform even subgraph.
pub fn sample_uog<R: Rng + ?Sized>(g: &MultiGraph, dimerisation: &EdgeConfig, rng: &mut R) -> Result<EdgeConfig> {
    check_perfect_matching(g, dimerisation)?;
    Ok(dimerisation.xor(&sample_ueg(g, &EdgeConfig::full(g.edge_count()), rng)))
}
