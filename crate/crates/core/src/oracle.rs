//! Brute-force exact laws on small hosts.
//!
//! Edge laws are keyed by edge masks, spin laws by the mask of minus spins.
//! Wired boundary conditions are handled on the quotient graph, which keeps
//! edge indices.

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{EdgeConfig, SpinConfig};
use crate::dist::{tv_distance, Distribution};
use crate::error::{Error, Result};
use crate::evens::{count_even, cycle_basis_of, even_subgraphs, gf2_span_elements};
use crate::lattice::{quotient, BoundaryCondition, MultiGraph};
use crate::models::{log_weight_ising, ModelParams, ISING_VERTEX_CAP};
use crate::planar::{interfaces, PlanarDual};
use crate::unionfind::DisjointSet;

pub use crate::dist::tv_distance as tv;

pub const EDGE_CAP: usize = 24;
pub const LOOP_RANK_CAP: usize = 24;
pub const UNION_SUPPORT_CAP: u128 = 1 << 24;
pub const CURRENT_DEFAULT_CAP: u32 = 20;

fn cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::CapExceeded { what, actual, limit })
    } else {
        Ok(())
    }
}

fn host_graph(g: &MultiGraph, bc: Option<&BoundaryCondition>) -> Result<MultiGraph> {
    Ok(match bc {
        Some(bc) => quotient(g, bc)?.graph,
        None => g.clone(),
    })
}

fn components_of_mask(g: &MultiGraph, mask: u64, uf: &mut DisjointSet) -> usize {
    uf.reset(g.vertex_count());
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        let (a, b) = g.edge(e);
        uf.union(a, b);
        m &= m - 1;
    }
    uf.components()
}

/// Exact random-cluster law `φ^ξ_p`.
pub fn enumerate_rc(g: &MultiGraph, bc: Option<&BoundaryCondition>, p: f64) -> Result<Distribution> {
    let m = g.edge_count();
    cap("edge count", m, EDGE_CAP)?;
    ModelParams::from_p(p)?;
    if p == 0.0 {
        return Ok(Distribution::point(m, 0));
    }
    if p == 1.0 {
        return Ok(Distribution::point(m, (1u64 << m) - 1));
    }
    let q = host_graph(g, bc)?;
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let logs: Vec<(u64, f64)> = (0u64..1 << m)
        .into_par_iter()
        .map_init(
            || DisjointSet::new(q.vertex_count()),
            |uf, mask| {
                let o = mask.count_ones() as f64;
                let k = components_of_mask(&q, mask, uf) as f64;
                (mask, k * std::f64::consts::LN_2 + o * lp + (m as f64 - o) * lq)
            },
        )
        .collect();
    Distribution::from_log_weights(m, logs)
}

/// Exact loop O(1) law `ℓ^ξ_x`, enumerated over the even subgraphs.
pub fn enumerate_loop(g: &MultiGraph, bc: Option<&BoundaryCondition>, x: f64) -> Result<Distribution> {
    let m = g.edge_count();
    cap("edge count", m, 64)?;
    ModelParams::from_x(x)?;
    if x == 0.0 {
        return Ok(Distribution::point(m, 0));
    }
    let q = host_graph(g, bc)?;
    let evens = even_subgraphs(&q, &EdgeConfig::full(m), LOOP_RANK_CAP)?;
    let lx = x.ln();
    Distribution::from_log_weights(m, evens.into_iter().map(|k| (k, k.count_ones() as f64 * lx)))
}

/// Product Bernoulli(`q`) law on `m` edges.
pub fn enumerate_bernoulli(m: usize, q: f64) -> Result<Distribution> {
    cap("edge count", m, EDGE_CAP)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ParameterOutOfRange(format!("q = {q}")));
    }
    if q == 0.0 || q == 1.0 {
        return Ok(Distribution::point(m, if q == 0.0 { 0 } else { (1u64 << m) - 1 }));
    }
    Distribution::from_weights(
        m,
        (0u64..1 << m).map(|k| {
            let o = k.count_ones() as i32;
            (k, q.powi(o) * (1.0 - q).powi(m as i32 - o))
        }),
    )
}

/// Exact Ising law with the vertices in `plus` pinned to `+`.
pub fn enumerate_ising(g: &MultiGraph, beta: f64, plus: Option<&[usize]>) -> Result<Distribution> {
    let n = g.vertex_count();
    cap("vertex count", n, 64)?;
    ModelParams::from_beta(beta)?;
    if !beta.is_finite() {
        return Err(Error::ParameterOutOfRange("beta = inf for spin enumeration".into()));
    }
    let plus = plus.unwrap_or(&[]);
    let free: Vec<usize> = (0..n).filter(|v| !plus.contains(v)).collect();
    cap("free vertex count", free.len(), ISING_VERTEX_CAP)?;
    let logs: Vec<(u64, f64)> = (0u64..1 << free.len())
        .into_par_iter()
        .map(|m| {
            let s = SpinConfig::from_indices(
                n,
                free.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &v)| v),
            );
            (s.to_mask(), log_weight_ising(g, &s, beta))
        })
        .collect();
    Distribution::from_log_weights(n, logs)
}

/// Law of the uniform even subgraph of a random configuration drawn from `d`
/// (evenness taken on the quotient by `bc`).
pub fn pushforward_ueg(g: &MultiGraph, bc: Option<&BoundaryCondition>, d: &Distribution) -> Result<Distribution> {
    let m = g.edge_count();
    if d.bits() != m {
        return Err(Error::Mismatch(format!("{}-bit law on {m} edges", d.bits())));
    }
    cap("edge count", m, 64)?;
    let q = host_graph(g, bc)?;
    let parts: Vec<Vec<(u64, f64)>> = d
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, p)| -> Result<Vec<(u64, f64)>> {
            let c = EdgeConfig::from_mask(m, k);
            let basis = cycle_basis_of(&q, &c);
            cap("cycle rank", basis.rank(), LOOP_RANK_CAP)?;
            debug_assert_eq!(basis.rank(), count_even(&q, &c));
            let gens: Vec<u64> = basis.generators.iter().map(|x| x.to_mask()).collect();
            let w = p / (1u64 << gens.len()) as f64;
            Ok(gf2_span_elements(&gens).into_iter().map(|e| (e, w)).collect())
        })
        .collect::<Result<_>>()?;
    let mut acc = std::collections::BTreeMap::new();
    for (k, w) in parts.into_iter().flatten() {
        *acc.entry(k).or_insert(0.0) += w;
    }
    Distribution::from_weights(m, acc)
}

/// Law of `ω_1 ∪ ω_2` for independent `ω_i ~ d_i`.
pub fn pushforward_union(d1: &Distribution, d2: &Distribution) -> Result<Distribution> {
    if d1.bits() != d2.bits() {
        return Err(Error::Mismatch(format!("{} vs {} bits", d1.bits(), d2.bits())));
    }
    let size = d1.support_len() as u128 * d2.support_len() as u128;
    if size > UNION_SUPPORT_CAP {
        return Err(Error::CapExceeded {
            what: "support product",
            actual: size.min(usize::MAX as u128) as usize,
            limit: UNION_SUPPORT_CAP as usize,
        });
    }
    let a: Vec<(u64, f64)> = d1.iter().collect();
    let b: Vec<(u64, f64)> = d2.iter().collect();
    let bits = d1.bits();
    if bits <= 20 {
        let mut dense = vec![0.0f64; 1 << bits];
        for &(x, px) in &a {
            for &(y, py) in &b {
                dense[(x | y) as usize] += px * py;
            }
        }
        return Distribution::from_weights(bits, dense.into_iter().enumerate().map(|(k, w)| (k as u64, w)));
    }
    let mut acc = std::collections::BTreeMap::new();
    for &(x, px) in &a {
        for &(y, py) in &b {
            *acc.entry(x | y).or_insert(0.0) += px * py;
        }
    }
    Distribution::from_weights(bits, acc)
}

/// Traced sourceless current law built as loops at `tanh β` joined with
/// Bernoulli(`1 − 1/cosh β`).
pub fn current_law(g: &MultiGraph, bc: Option<&BoundaryCondition>, beta: f64) -> Result<Distribution> {
    let params = ModelParams::from_beta(beta)?;
    let loops = enumerate_loop(g, bc, params.x)?;
    pushforward_union(&loops, &enumerate_bernoulli(g.edge_count(), params.current_density())?)
}

/// Law of the union of two independent traced currents.
pub fn double_current_law(g: &MultiGraph, bc: Option<&BoundaryCondition>, beta: f64) -> Result<Distribution> {
    let single = current_law(g, bc, beta)?;
    pushforward_union(&single, &single)
}

/// Truncated traced-current law and a bound on its total variation distance
/// to the untruncated law.
#[derive(Clone, Debug)]
pub struct TruncatedCurrent {
    pub law: Distribution,
    pub tail_bound: f64,
}

/// Law of the trace of a sourceless current with multiplicities at most
/// `cap`, by exact summation.
///
/// Per edge the multiplicity falls in one of three classes: zero, positive
/// even, odd; within a class the weights `β^k/k!` sum in closed form. The
/// odd edges must form an even subgraph. Enumerating (even subgraph, subset
/// of the remaining edges) covers every class vector once.
///
/// The tail bound is `|E| · R · e^{β(|E| − 1)}` with `R = Σ_{k > cap}
/// β^k/k!`: the weight of currents with some multiplicity above `cap`,
/// relative to a partition function of at least 1.
pub fn current_truncated(g: &MultiGraph, beta: f64, cap_k: u32) -> Result<TruncatedCurrent> {
    let m = g.edge_count();
    cap("edge count", m, EDGE_CAP)?;
    if beta.is_nan() || beta < 0.0 || beta.is_infinite() {
        return Err(Error::ParameterOutOfRange(format!("beta = {beta}")));
    }
    if beta == 0.0 {
        return Ok(TruncatedCurrent {
            law: Distribution::point(m, 0),
            tail_bound: 0.0,
        });
    }
    let mut term = 1.0;
    let (mut even, mut odd) = (0.0, 0.0);
    for k in 1..=cap_k {
        term *= beta / k as f64;
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    let mut rest = 0.0;
    let mut k = cap_k + 1;
    let mut t = term * beta / k as f64;
    while t > 0.0 && t > rest * 1e-18 {
        rest += t;
        k += 1;
        t *= beta / k as f64;
    }
    let tail_bound = (m as f64 * rest * (beta * (m as f64 - 1.0)).exp()).min(1.0);
    let evens = even_subgraphs(g, &EdgeConfig::full(m), LOOP_RANK_CAP)?;
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut acc = vec![0.0f64; 1 << m];
    for eta in evens {
        let free = full & !eta;
        let base = odd.powi(eta.count_ones() as i32);
        let mut s = free;
        loop {
            acc[(eta | s) as usize] += base * even.powi(s.count_ones() as i32);
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
    }
    Ok(TruncatedCurrent {
        law: Distribution::from_weights(m, acc.into_iter().enumerate().map(|(k, w)| (k as u64, w)))?,
        tail_bound,
    })
}

/// `⟨σ_v σ_w⟩` under the free Ising measure, by spin enumeration.
pub fn correlation(g: &MultiGraph, beta: f64, v: usize, w: usize) -> Result<f64> {
    let d = enumerate_ising(g, beta, None)?;
    Ok(spin_correlation(&d, v, w))
}

/// `⟨σ_v σ_w⟩` from an exact spin law.
pub fn spin_correlation(d: &Distribution, v: usize, w: usize) -> f64 {
    d.expectation(|k| if (k >> v ^ k >> w) & 1 == 0 { 1.0 } else { -1.0 })
}

/// `P[v ↔ w]` under an exact edge law on `g`.
pub fn connectivity(g: &MultiGraph, d: &Distribution, v: usize, w: usize) -> f64 {
    let mut uf = DisjointSet::new(g.vertex_count());
    d.iter()
        .map(|(k, p)| {
            components_of_mask(g, k, &mut uf);
            if uf.same(v, w) {
                p
            } else {
                0.0
            }
        })
        .sum()
}

/// Exact law of the interfaces of the plus-boundary Ising model at `beta` on
/// the faces of a planar patch (the outer face is pinned to `+`).
pub fn interface_law(dual: &PlanarDual, beta: f64) -> Result<Distribution> {
    let outer = dual
        .outer_face()
        .ok_or_else(|| Error::NotPlanar("no outer face to pin".into()))?;
    let spins = enumerate_ising(&dual.graph, beta, Some(&[outer]))?;
    let faces = dual.graph.vertex_count();
    let m = dual.graph.edge_count();
    cap("edge count", m, 64)?;
    let mut acc = std::collections::BTreeMap::new();
    for (k, p) in spins.iter() {
        let s = SpinConfig::from_mask(faces, k);
        *acc.entry(interfaces(dual, &s)?.to_mask()).or_insert(0.0) += p;
    }
    Distribution::from_weights(m, acc)
}

/// One checked identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub host: String,
    pub params: String,
    pub tv: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(identity: &str, host: &str, params: String, tv: f64, tolerance: f64) -> Self {
        Self {
            identity: identity.into(),
            host: host.into(),
            params,
            tv,
            tolerance,
            pass: tv <= tolerance,
        }
    }
}

/// The coupling, counting and correlation identities on one host at one
/// random-cluster parameter, for the free and (if the host has a boundary)
/// wired conditions.
pub fn identity_suite(g: &MultiGraph, host: &str, p: f64) -> Result<Vec<IdentityReport>> {
    let params = ModelParams::from_p(p)?;
    let mut out = Vec::new();
    let mut bcs: Vec<(&str, Option<BoundaryCondition>)> = vec![("free", None)];
    if !g.boundary().is_empty() {
        bcs.push(("wired", Some(BoundaryCondition::wired(g))));
    }
    for (name, bc) in &bcs {
        let bc = bc.as_ref();
        let label = format!("p={p} bc={name}");
        let rc = enumerate_rc(g, bc, p)?;
        let loops = enumerate_loop(g, bc, params.x)?;
        let ueg_rc = pushforward_ueg(g, bc, &rc)?;
        out.push(IdentityReport::new("ueg(rc) = loop", host, label.clone(), tv_distance(&ueg_rc, &loops)?, 1e-12));
        let sprinkled = pushforward_union(&loops, &enumerate_bernoulli(g.edge_count(), params.x)?)?;
        out.push(IdentityReport::new("loop ∪ bern(tanh β) = rc", host, label.clone(), tv_distance(&sprinkled, &rc)?, 1e-12));
        let dc = double_current_law(g, bc, params.beta)?;
        let ueg_dc = pushforward_ueg(g, bc, &dc)?;
        out.push(IdentityReport::new("ueg(double current) = loop", host, label.clone(), tv_distance(&ueg_dc, &loops)?, 1e-12));
    }
    let m = g.edge_count();
    let mut worst = 0u64;
    for k in 0u64..1 << m {
        let c = EdgeConfig::from_mask(m, k);
        let brute = count_even_subsets(g, k);
        if brute != 1u64 << count_even(g, &c) {
            worst += 1;
        }
    }
    out.push(IdentityReport::new("|even subsets| = 2^(κ+o−|V|)", host, "all configs".into(), worst as f64, 0.0));
    if g.vertex_count() <= ISING_VERTEX_CAP && params.beta.is_finite() {
        let spins = enumerate_ising(g, params.beta, None)?;
        let rc = enumerate_rc(g, None, p)?;
        let dc = double_current_law(g, None, params.beta)?;
        let (mut e1, mut e2) = (0.0f64, 0.0f64);
        for v in 0..g.vertex_count() {
            for w in v + 1..g.vertex_count() {
                let c = spin_correlation(&spins, v, w);
                e1 = e1.max((c - connectivity(g, &rc, v, w)).abs());
                e2 = e2.max((c * c - connectivity(g, &dc, v, w)).abs());
            }
        }
        let label = format!("beta={}", params.beta);
        out.push(IdentityReport::new("<σσ> = φ[v↔w]", host, label.clone(), e1, 1e-10));
        out.push(IdentityReport::new("<σσ>² = P⊗2[v↔w]", host, label, e2, 1e-10));
    }
    Ok(out)
}

/// Number of even subsets of the edge mask `c`, by enumeration.
pub fn count_even_subsets(g: &MultiGraph, c: u64) -> u64 {
    let mut n = 0;
    let mut s = c;
    let mut deg = vec![0u8; g.vertex_count()];
    loop {
        deg.iter_mut().for_each(|d| *d = 0);
        let mut t = s;
        while t != 0 {
            let e = t.trailing_zeros() as usize;
            let (a, b) = g.edge(e);
            if a != b {
                deg[a] ^= 1;
                deg[b] ^= 1;
            }
            t &= t - 1;
        }
        if deg.iter().all(|&d| d == 0) {
            n += 1;
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & c;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_box;

    fn single_edge() -> MultiGraph {
        MultiGraph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn enumerator_examples() {
        let e = single_edge();
        let p = 0.37;
        let rc = enumerate_rc(&e, None, p).unwrap();
        assert!((rc.prob(1) - p / (2.0 - p)).abs() < 1e-15);
        assert_eq!(enumerate_loop(&e, None, 0.5).unwrap().prob(1), 0.0);
        let t = MultiGraph::cycle(3).unwrap();
        let x: f64 = 0.45;
        let l = enumerate_loop(&t, None, x).unwrap();
        assert!((l.prob(7) - x.powi(3) / (1.0 + x.powi(3))).abs() < 1e-15);
        for d in [rc, l, enumerate_ising(&t, 0.4, None).unwrap()] {
            d.validate(1e-12).unwrap();
        }
        assert!(enumerate_rc(&build_box(2, 2).unwrap(), None, 0.5).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let tree = MultiGraph::path(4).unwrap();
        let full = Distribution::point(3, 7);
        assert_eq!(pushforward_ueg(&tree, None, &full).unwrap(), Distribution::point(3, 0));
        let c4 = MultiGraph::cycle(4).unwrap();
        let u = pushforward_ueg(&c4, None, &Distribution::point(4, 15)).unwrap();
        assert_eq!((u.prob(0), u.prob(15)), (0.5, 0.5));
        let d = enumerate_bernoulli(4, 0.3).unwrap();
        assert!(tv_distance(&pushforward_union(&d, &Distribution::point(4, 0)).unwrap(), &d).unwrap() < 1e-15);
        let pt = pushforward_union(&Distribution::point(4, 3), &Distribution::point(4, 6)).unwrap();
        assert_eq!(pt, Distribution::point(4, 7));
    }

    #[test]
    fn rc_loop_coupling_on_grid() {
        let g = build_box(2, 1).unwrap();
        for p in [0.2, 0.5, 0.8] {
            let x = p / (2.0 - p);
            let rc = enumerate_rc(&g, None, p).unwrap();
            let l = enumerate_loop(&g, None, x).unwrap();
            assert!(tv_distance(&pushforward_ueg(&g, None, &rc).unwrap(), &l).unwrap() < 1e-12);
            let sprinkled = pushforward_union(&l, &enumerate_bernoulli(12, x).unwrap()).unwrap();
            assert!(tv_distance(&sprinkled, &rc).unwrap() < 1e-12);
        }
    }

    #[test]
    fn correlation_examples() {
        let e = single_edge();
        let b: f64 = 0.8;
        assert!((correlation(&e, b, 0, 1).unwrap() - b.tanh()).abs() < 1e-15);
        let g = build_box(2, 1).unwrap();
        assert!(correlation(&g, 0.0, 0, 8).unwrap().abs() < 1e-15);
        let p = ModelParams::from_beta(0.4).unwrap().p;
        let rc = enumerate_rc(&g, None, p).unwrap();
        for v in 1..9 {
            let c = correlation(&g, 0.4, 0, v).unwrap();
            assert!((c - connectivity(&g, &rc, 0, v)).abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_current_examples() {
        let e = single_edge();
        assert_eq!(current_truncated(&e, 0.0, 20).unwrap().law, Distribution::point(1, 0));
        let b: f64 = 0.9;
        let t = current_truncated(&e, b, 40).unwrap();
        assert!((t.law.prob(1) - (b.cosh() - 1.0) / b.cosh()).abs() < 1e-14);
        assert!(t.tail_bound < 1e-40);
        let tri = MultiGraph::cycle(3).unwrap();
        let t = current_truncated(&tri, 0.5, 20).unwrap();
        let law = current_law(&tri, None, 0.5).unwrap();
        assert!(tv_distance(&t.law, &law).unwrap() <= t.tail_bound + 1e-14);
    }

    #[test]
    fn suite_passes_on_grid() {
        let g = build_box(2, 1).unwrap();
        for r in identity_suite(&g, "grid", 0.5).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }
}
