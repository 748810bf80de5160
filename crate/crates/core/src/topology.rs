//! Wrap-arounds on tori: crossing parity, non-trivial components, greedy
//! packing of edge-disjoint wrap-arounds, and the XOR action of wrap-arounds
//! on even subgraphs.
//!
//! A cycle is a wrap-around when it uses an odd number of the outgoing edges of
//! a hyperplane. Within a connected component, the crossing parities of all
//! cycles form the span of the parities of its fundamental cycles, so a
//! component contains a wrap-around iff one of its fundamental cycles is
//! odd. This is checked with one BFS per component carrying a parity label per
//! vertex: the fundamental cycle of a non-tree edge `ab` has parity
//! `label(a) ⊕ label(b) ⊕ out(ab)`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rand::Rng;
use rayon::prelude::*;

use crate::bits::EdgeConfig;
use crate::error::{Error, Result};
use crate::evens::source_map;
use crate::lattice::{Hyperplane, MultiGraph};

const NONE: u32 = u32::MAX;

fn check_host(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<()> {
    if !g.is_torus() {
        return Err(Error::NotTorus);
    }
    if c.len() != g.edge_count() || h.outgoing_set().len() != g.edge_count() {
        return Err(Error::Mismatch("configuration and hyperplane must live on the host".into()));
    }
    Ok(())
}

/// Parity of the number of outgoing edges of `h` open in `c`.
pub fn crossing_parity(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<bool> {
    check_host(g, c, h)?;
    Ok(c.intersection(h.outgoing_set()).count() % 2 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInfo {
    pub vertices: Vec<usize>,
    pub edge_count: usize,
    pub nontrivial: bool,
}

impl ComponentInfo {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Components of `(V, E_c)` with their wrap-around status, and the union
/// `C_NT` of the non-trivial ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingReport {
    pub components: Vec<ComponentInfo>,
    pub cnt_vertices: Vec<usize>,
    pub cnt_edges: EdgeConfig,
    /// Greedy lower bound on the number of edge-disjoint wrap-arounds, when
    /// requested.
    pub wraparound_lb: Option<usize>,
}

impl WindingReport {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_nontrivial(&self) -> usize {
        self.components.iter().filter(|c| c.nontrivial).count()
    }

    /// Number of vertices in `C_NT`.
    pub fn cnt_size(&self) -> usize {
        self.cnt_vertices.len()
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.cnt_vertices.is_empty()
    }
}

/// Per-vertex component id and the non-triviality of each component.
struct Labelling {
    comp: Vec<u32>,
    order: Vec<u32>,
    starts: Vec<usize>,
    nontrivial: Vec<bool>,
}

fn label_components(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Labelling {
    let n = g.vertex_count();
    let out = h.outgoing_set();
    let mut comp = vec![NONE; n];
    let mut parity = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts = Vec::new();
    for root in 0..n {
        if comp[root] != NONE {
            continue;
        }
        let id = starts.len() as u32;
        starts.push(order.len());
        comp[root] = id;
        order.push(root as u32);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &(e, w) in g.incident(v) {
                let (e, w) = (e as usize, w as usize);
                if comp[w] == NONE && c.contains(e) {
                    comp[w] = id;
                    parity[w] = parity[v] ^ out.contains(e);
                    order.push(w as u32);
                }
            }
        }
    }
    let mut nontrivial = vec![false; starts.len()];
    for e in c.iter() {
        let (a, b) = g.edge(e);
        if parity[a] ^ parity[b] ^ out.contains(e) {
            nontrivial[comp[a] as usize] = true;
        }
    }
    Labelling {
        comp,
        order,
        starts,
        nontrivial,
    }
}

/// Splits `(V, E_c)` into components and marks those containing a
/// wrap-around.
pub fn classify_components(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<WindingReport> {
    check_host(g, c, h)?;
    let lab = label_components(g, c, h);
    let k = lab.starts.len();
    let mut edge_counts = vec![0usize; k];
    let mut cnt_edges = EdgeConfig::empty(g.edge_count());
    for e in c.iter() {
        let id = lab.comp[g.edge(e).0] as usize;
        edge_counts[id] += 1;
        if lab.nontrivial[id] {
            cnt_edges.set(e, true);
        }
    }
    let mut components = Vec::with_capacity(k);
    let mut cnt_vertices = Vec::new();
    for id in 0..k {
        let end = if id + 1 < k { lab.starts[id + 1] } else { lab.order.len() };
        let mut vertices: Vec<usize> = lab.order[lab.starts[id]..end].iter().map(|&v| v as usize).collect();
        vertices.sort_unstable();
        if lab.nontrivial[id] {
            cnt_vertices.extend_from_slice(&vertices);
        }
        components.push(ComponentInfo {
            vertices,
            edge_count: edge_counts[id],
            nontrivial: lab.nontrivial[id],
        });
    }
    cnt_vertices.sort_unstable();
    Ok(WindingReport {
        components,
        cnt_vertices,
        cnt_edges,
        wraparound_lb: None,
    })
}

/// Whether some component of `c` contains a wrap-around.
pub fn is_nontrivial(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<bool> {
    check_host(g, c, h)?;
    Ok(label_components(g, c, h).nontrivial.iter().any(|&b| b))
}

/// Whether `c` is a single simple cycle (connected, every touched vertex of
/// degree 2).
pub fn is_simple_cycle(g: &MultiGraph, c: &EdgeConfig) -> bool {
    if c.is_empty() {
        return false;
    }
    let mut deg = vec![0u32; g.vertex_count()];
    for e in c.iter() {
        let (a, b) = g.edge(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let mut uf = crate::unionfind::DisjointSet::new(g.vertex_count());
    for e in c.iter() {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    let touched = deg.iter().filter(|&&d| d > 0).count();
    uf.components() == g.vertex_count() - touched + 1
}

/// `η Δ γ` for an even `η` and a wrap-around `γ`.
pub fn xor_action(g: &MultiGraph, eta: &EdgeConfig, gamma: &EdgeConfig, h: &Hyperplane) -> Result<EdgeConfig> {
    check_host(g, eta, h)?;
    if !source_map(g, eta).is_empty() {
        return Err(Error::InvalidArgument("η is not even".into()));
    }
    if !is_simple_cycle(g, gamma) {
        return Err(Error::InvalidArgument("γ is not a simple loop".into()));
    }
    if !crossing_parity(g, gamma, h)? {
        return Err(Error::InvalidArgument("γ has crossing parity 0".into()));
    }
    let out = eta.xor(gamma);
    debug_assert!(
        is_nontrivial(g, eta, h)? || is_nontrivial(g, &out, h)?,
        "trivial η stayed trivial under a wrap-around"
    );
    Ok(out)
}

/// Shortest cycle of `c` with odd crossing parity, as an edge list.
///
/// Breadth-first search in the double cover `(vertex, parity)` from the tail
/// of every open outgoing edge (every odd cycle passes through one). The
/// shortest odd closed walk found is reduced to a simple odd cycle by peeling
/// off closed sub-walks.
fn shortest_odd_cycle(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let out = h.outgoing_set();
    let mut starts: Vec<usize> = h.outgoing.iter().filter(|&&e| c.contains(e)).map(|&e| g.edge(e).0).collect();
    starts.sort_unstable();
    starts.dedup();
    let mut best: Option<Vec<usize>> = None;
    let mut dist = vec![u32::MAX; 2 * n];
    let mut pred = vec![(NONE, NONE); 2 * n];
    let mut queue = VecDeque::new();
    for s in starts {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        queue.clear();
        dist[2 * s] = 0;
        queue.push_back(2 * s);
        let target = 2 * s + 1;
        let limit = best.as_ref().map_or(u32::MAX, |b| b.len() as u32);
        while let Some(st) = queue.pop_front() {
            if st == target || dist[st] + 1 >= limit {
                break;
            }
            let (v, p) = (st / 2, st % 2);
            for &(e, w) in g.incident(v) {
                let (e, w) = (e as usize, w as usize);
                if !c.contains(e) {
                    continue;
                }
                let q = p ^ out.contains(e) as usize;
                let nx = 2 * w + q;
                if dist[nx] == u32::MAX {
                    dist[nx] = dist[st] + 1;
                    pred[nx] = (st as u32, e as u32);
                    queue.push_back(nx);
                }
            }
        }
        if dist[target] != u32::MAX && best.as_ref().is_none_or(|b| (dist[target] as usize) < b.len()) {
            let mut walk = Vec::new();
            let mut st = target;
            while st != 2 * s {
                let (prev, e) = pred[st];
                walk.push(e as usize);
                st = prev as usize;
            }
            walk.reverse();
            best = Some(simple_odd_piece(g, s, &walk, out));
        }
    }
    best
}

/// Peels closed sub-walks off an odd closed walk starting at `s` until an odd
/// simple cycle remains.
fn simple_odd_piece(g: &MultiGraph, s: usize, walk: &[usize], out: &EdgeConfig) -> Vec<usize> {
    let mut stack_v: Vec<usize> = vec![s];
    let mut stack_e: Vec<usize> = Vec::new();
    for &e in walk {
        let (a, b) = g.edge(e);
        let cur = *stack_v.last().unwrap();
        let next = if a == cur { b } else { a };
        stack_e.push(e);
        if let Some(pos) = stack_v.iter().position(|&v| v == next) {
            let piece: Vec<usize> = stack_e[pos..].to_vec();
            let odd = piece.iter().filter(|&&f| out.contains(f)).count() % 2 == 1;
            if odd {
                return piece;
            }
            stack_v.truncate(pos + 1);
            stack_e.truncate(pos);
        } else {
            stack_v.push(next);
        }
    }
    unreachable!("an odd closed walk contains an odd simple cycle")
}

/// Greedily extracted edge-disjoint wrap-arounds of `c`, shortest first.
pub fn extract_disjoint_wraparounds(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<Vec<EdgeConfig>> {
    check_host(g, c, h)?;
    let mut rest = c.clone();
    let mut loops = Vec::new();
    while let Some(cycle) = shortest_odd_cycle(g, &rest, h) {
        for &e in &cycle {
            rest.set(e, false);
        }
        loops.push(EdgeConfig::from_indices(g.edge_count(), cycle));
    }
    Ok(loops)
}

/// Lower bound on the maximal number of edge-disjoint wrap-arounds in `c`.
pub fn count_disjoint_wraparounds(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<usize> {
    Ok(extract_disjoint_wraparounds(g, c, h)?.len())
}

/// Classification with the wrap-around lower bound filled in.
pub fn winding_report(g: &MultiGraph, c: &EdgeConfig, h: &Hyperplane) -> Result<WindingReport> {
    let mut r = classify_components(g, c, h)?;
    r.wraparound_lb = Some(count_disjoint_wraparounds(g, c, h)?);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitMode {
    /// All `2^m` subsets; needs `m ≤ 20`.
    Exact,
    Sampled { samples: u64, seed: u64 },
}

pub const ORBIT_EXACT_CAP: usize = 20;

/// Statistics of `|C_NT(η₀ Δ γ_A)|` over subsets `A` of the loops.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrbitStats {
    pub evaluated: u64,
    pub nontrivial: u64,
    pub cnt_size_counts: BTreeMap<usize, u64>,
}

impl OrbitStats {
    pub fn p_nontrivial(&self) -> f64 {
        self.nontrivial as f64 / self.evaluated as f64
    }

    pub fn mean_cnt_size(&self) -> f64 {
        self.cnt_size_counts.iter().map(|(&s, &n)| s as f64 * n as f64).sum::<f64>() / self.evaluated as f64
    }

    fn add(&mut self, cnt: usize) {
        self.evaluated += 1;
        if cnt > 0 {
            self.nontrivial += 1;
        }
        *self.cnt_size_counts.entry(cnt).or_insert(0) += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        self.evaluated += other.evaluated;
        self.nontrivial += other.nontrivial;
        for (k, v) in other.cnt_size_counts {
            *self.cnt_size_counts.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Orbit of `η₀` under the group generated by edge-disjoint wrap-arounds.
pub fn group_orbit_stats(
    g: &MultiGraph,
    eta0: &EdgeConfig,
    loops: &[EdgeConfig],
    h: &Hyperplane,
    mode: OrbitMode,
) -> Result<OrbitStats> {
    check_host(g, eta0, h)?;
    for (i, a) in loops.iter().enumerate() {
        if a.len() != g.edge_count() {
            return Err(Error::Mismatch("loop on another host".into()));
        }
        if loops[..i].iter().any(|b| !a.is_disjoint(b)) {
            return Err(Error::InvalidArgument("loops are not edge-disjoint".into()));
        }
    }
    let m = loops.len();
    let eval = |mask: u64| -> usize {
        let mut eta = eta0.clone();
        for (i, l) in loops.iter().enumerate() {
            if mask >> i & 1 == 1 {
                eta.xor_assign(l);
            }
        }
        classify_components(g, &eta, h).map(|r| r.cnt_size()).unwrap_or(0)
    };
    let stats = match mode {
        OrbitMode::Exact => {
            if m > ORBIT_EXACT_CAP {
                return Err(Error::CapExceeded {
                    what: "loop count",
                    actual: m,
                    limit: ORBIT_EXACT_CAP,
                });
            }
            (0u64..1 << m)
                .into_par_iter()
                .fold(OrbitStats::default, |mut s, mask| {
                    s.add(eval(mask));
                    s
                })
                .reduce(OrbitStats::default, OrbitStats::merge)
        }
        OrbitMode::Sampled { samples, seed } => (0..samples)
            .into_par_iter()
            .fold(OrbitStats::default, |mut s, i| {
                let mut rng = crate::rng::stream(seed, i);
                let mask = if m == 0 { 0 } else { rng.random::<u64>() & (u64::MAX >> (64 - m.min(64))) };
                s.add(eval(mask));
                s
            })
            .reduce(OrbitStats::default, OrbitStats::merge),
    };
    Ok(stats)
}

/// All simple cycles of a graph with at most 64 edges, as edge masks, up to
/// `limit` of them.
pub fn enumerate_simple_cycles(g: &MultiGraph, limit: usize) -> Result<Vec<u64>> {
    if g.edge_count() > 64 {
        return Err(Error::CapExceeded {
            what: "edge count",
            actual: g.edge_count(),
            limit: 64,
        });
    }
    let mut found: HashSet<u64> = HashSet::new();
    for s in 0..g.vertex_count() {
        for &(e, w) in g.incident(s) {
            if w as usize == s {
                found.insert(1 << e);
            }
        }
        // paths from s through vertices > s, closed by an edge back to s
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        let mut stack: Vec<(usize, u64, usize)> = vec![(s, 0, 0)];
        while let Some(&mut (v, used, ref mut idx)) = stack.last_mut() {
            if found.len() >= limit {
                break;
            }
            let inc = g.incident(v);
            if *idx >= inc.len() {
                on_path[v] = false;
                stack.pop();
                if stack.is_empty() {
                    break;
                }
                continue;
            }
            let (e, w) = inc[*idx];
            *idx += 1;
            let (e, w) = (e as usize, w as usize);
            if used >> e & 1 == 1 || w == v {
                continue;
            }
            if w == s && used != 0 {
                found.insert(used | 1 << e);
            } else if w > s && !on_path[w] {
                on_path[w] = true;
                stack.push((w, used | 1 << e, 0));
            }
        }
        on_path[s] = false;
    }
    let mut v: Vec<u64> = found.into_iter().collect();
    v.sort_unstable();
    v.truncate(limit);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evens::{cycle_basis_of, even_subgraphs, sample_ueg};
    use crate::lattice::{build_torus, hyperplane};
    use crate::rng::stream;

    fn straight(g: &MultiGraph, row: i64, axis: u8) -> EdgeConfig {
        let other = if axis == 0 { 1 } else { 0 };
        EdgeConfig::from_indices(
            g.edge_count(),
            (0..g.edge_count()).filter(|&e| g.label(e) == Some(axis) && g.coords(g.edge(e).0).unwrap()[other] == row),
        )
    }

    fn plaquette(g: &MultiGraph, x: i64, y: i64) -> EdgeConfig {
        let v = g.find_vertex(&[x, y]).unwrap();
        let r = g.find_vertex(&[x + 1, y]).unwrap();
        let u = g.find_vertex(&[x, y + 1]).unwrap();
        let find = |a: usize, l: u8| (0..g.edge_count()).find(|&e| g.edge(e).0 == a && g.label(e) == Some(l)).unwrap();
        EdgeConfig::from_indices(g.edge_count(), [find(v, 0), find(v, 1), find(r, 1), find(u, 0)])
    }

    #[test]
    fn parity_examples() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let line = straight(&g, 0, 0);
        assert!(crossing_parity(&g, &line, &h).unwrap());
        let pl = plaquette(&g, 0, 1);
        assert!(!crossing_parity(&g, &pl, &h).unwrap());
        assert!(crossing_parity(&g, &line.xor(&pl), &h).unwrap());
    }

    #[test]
    fn classification_examples() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let line = straight(&g, 0, 0);
        let r = classify_components(&g, &line, &h).unwrap();
        assert_eq!(r.cnt_edges, line);
        assert_eq!(r.cnt_size(), 4);
        let pl = plaquette(&g, 1, 2);
        let r = classify_components(&g, &pl, &h).unwrap();
        assert!(r.cnt_vertices.is_empty());
        let both = line.union(&pl);
        let r = classify_components(&g, &both, &h).unwrap();
        assert_eq!(r.cnt_edges, line);
        assert_eq!(r.n_nontrivial(), 1);
        // a vertical straight cycle never crosses the axis-0 hyperplane
        assert!(!is_nontrivial(&g, &straight(&g, 0, 1), &h).unwrap());
    }

    #[test]
    fn classification_matches_basis_span() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let mut rng = stream(11, 0);
        for _ in 0..300 {
            let c = crate::models::sample_bernoulli(&g, 0.55, &mut rng).unwrap();
            let r = classify_components(&g, &c, &h).unwrap();
            for comp in &r.components {
                let mut sub = EdgeConfig::empty(g.edge_count());
                for e in c.iter() {
                    if comp.vertices.binary_search(&g.edge(e).0).is_ok() {
                        sub.set(e, true);
                    }
                }
                let basis = cycle_basis_of(&g, &sub);
                let odd = basis.generators.iter().any(|x| crossing_parity(&g, x, &h).unwrap());
                assert_eq!(odd, comp.nontrivial);
            }
        }
    }

    #[test]
    fn classification_is_level_independent() {
        let g = build_torus(2, 2).unwrap();
        let hs: Vec<Hyperplane> = (0..4).map(|l| hyperplane(&g, l).unwrap()).collect();
        let mut rng = stream(12, 0);
        for _ in 0..300 {
            let c = crate::models::sample_bernoulli(&g, 0.5, &mut rng).unwrap();
            let base = classify_components(&g, &c, &hs[0]).unwrap();
            for h in &hs[1..] {
                assert_eq!(classify_components(&g, &c, h).unwrap(), base);
            }
        }
    }

    #[test]
    fn xor_action_examples() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let gamma = straight(&g, 1, 0);
        let empty = EdgeConfig::empty(g.edge_count());
        assert_eq!(xor_action(&g, &empty, &gamma, &h).unwrap(), gamma);
        assert!(xor_action(&g, &gamma, &gamma, &h).unwrap().is_empty());
        let pl = plaquette(&g, 2, 2);
        assert!(is_nontrivial(&g, &xor_action(&g, &pl, &gamma, &h).unwrap(), &h).unwrap());
        assert!(xor_action(&g, &empty, &pl, &h).is_err());
    }

    #[test]
    fn disjoint_wraparound_examples() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let two = straight(&g, 0, 0).union(&straight(&g, 2, 0));
        assert_eq!(count_disjoint_wraparounds(&g, &two, &h).unwrap(), 2);
        assert!(count_disjoint_wraparounds(&g, &EdgeConfig::full(32), &h).unwrap() >= 4);
        assert_eq!(count_disjoint_wraparounds(&g, &plaquette(&g, 0, 0), &h).unwrap(), 0);
        let loops = extract_disjoint_wraparounds(&g, &EdgeConfig::full(32), &h).unwrap();
        for (i, l) in loops.iter().enumerate() {
            assert!(is_simple_cycle(&g, l));
            assert!(crossing_parity(&g, l, &h).unwrap());
            assert!(loops[..i].iter().all(|m| m.is_disjoint(l)));
        }
    }

    #[test]
    fn greedy_is_a_lower_bound() {
        // exact maximum packing by brute force on T_1^2 (8 edges)
        let g = build_torus(2, 1).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let cycles: Vec<u64> = enumerate_simple_cycles(&g, usize::MAX)
            .unwrap()
            .into_iter()
            .filter(|&c| crossing_parity(&g, &EdgeConfig::from_mask(8, c), &h).unwrap())
            .collect();
        fn best(cycles: &[u64], avail: u64) -> usize {
            cycles
                .iter()
                .enumerate()
                .filter(|(_, &c)| c & avail == c)
                .map(|(i, &c)| 1 + best(&cycles[i + 1..], avail & !c))
                .max()
                .unwrap_or(0)
        }
        for mask in 0u64..256 {
            let c = EdgeConfig::from_mask(8, mask);
            let lb = count_disjoint_wraparounds(&g, &c, &h).unwrap();
            assert!(lb <= best(&cycles, mask));
        }
    }

    #[test]
    fn orbit_examples() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let empty = EdgeConfig::empty(g.edge_count());
        let one = vec![straight(&g, 0, 0)];
        let s = group_orbit_stats(&g, &empty, &one, &h, OrbitMode::Exact).unwrap();
        assert_eq!((s.evaluated, s.nontrivial), (2, 1));
        let three: Vec<EdgeConfig> = (0..3).map(|r| straight(&g, r, 0)).collect();
        let s = group_orbit_stats(&g, &empty, &three, &h, OrbitMode::Exact).unwrap();
        assert_eq!(s.evaluated, 8);
        assert!(s.p_nontrivial() >= 0.5);
        assert_eq!(s.nontrivial, 7);
        let s = group_orbit_stats(&g, &empty, &[], &h, OrbitMode::Exact).unwrap();
        assert_eq!((s.evaluated, s.nontrivial), (1, 0));
        let overlapping = vec![straight(&g, 0, 0), straight(&g, 0, 0)];
        assert!(group_orbit_stats(&g, &empty, &overlapping, &h, OrbitMode::Exact).is_err());
    }

    #[test]
    fn simple_cycles_of_small_graphs() {
        assert_eq!(enumerate_simple_cycles(&MultiGraph::cycle(5).unwrap(), 100).unwrap().len(), 1);
        // K4 has 7 cycles
        let k4 = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(enumerate_simple_cycles(&k4, 100).unwrap().len(), 7);
        let dbl = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(enumerate_simple_cycles(&dbl, 100).unwrap(), vec![3]);
    }

    #[test]
    fn orbit_half_bound_on_sampled_evens() {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let mut rng = stream(13, 0);
        let full = EdgeConfig::full(32);
        let loops = extract_disjoint_wraparounds(&g, &full, &h).unwrap();
        for _ in 0..20 {
            let eta = sample_ueg(&g, &full, &mut rng);
            let s = group_orbit_stats(&g, &eta, &loops, &h, OrbitMode::Exact).unwrap();
            assert!(s.p_nontrivial() >= 0.5);
        }
        assert_eq!(even_subgraphs(&g, &full, 20).unwrap().len(), 1 << 17);
    }
}
