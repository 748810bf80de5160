//! Monte Carlo cluster statistics with batch-means error bars.
//!
//! Samples are split into `batches` consecutive batches. With the
//! Swendsen–Wang backend each batch runs its own chain seeded by
//! `stream(seed, batch)`; with the exact backend sample `i` uses
//! `stream(seed, i)`. Batches run in parallel and are merged in index order, so
//! results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::EdgeConfig;
use crate::error::{Error, Result};
use crate::lattice::{hyperplane, linf_distance, BoundaryCondition, Hyperplane, MultiGraph};
use crate::models::{Backend, ConfigSampler, Model};
use crate::rng::stream;
use crate::topology::{classify_components, count_disjoint_wraparounds};
use crate::unionfind::DisjointSet;

pub const DEFAULT_BATCHES: usize = 32;
pub const MIN_BATCHES: usize = 16;

/// Connected components of `(V, E_c)`.
#[derive(Clone, Debug)]
pub struct Clusters {
    label: Vec<u32>,
    sizes: Vec<usize>,
}

pub fn clusters(g: &MultiGraph, c: &EdgeConfig) -> Clusters {
    let n = g.vertex_count();
    let mut uf = DisjointSet::new(n);
    for e in c.iter() {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    let mut label = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        if label[r] == u32::MAX {
            label[r] = sizes.len() as u32;
            sizes.push(0);
        }
        label[v] = label[r];
        sizes[label[v] as usize] += 1;
    }
    Clusters { label, sizes }
}

impl Clusters {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, v: usize) -> usize {
        self.label[v] as usize
    }

    pub fn connected(&self, v: usize, w: usize) -> bool {
        self.label[v] == self.label[w]
    }

    pub fn size_of(&self, v: usize) -> usize {
        self.sizes[self.label(v)]
    }

    pub fn members(&self, v: usize) -> Vec<usize> {
        let l = self.label[v];
        (0..self.label.len()).filter(|&u| self.label[u] == l).collect()
    }

    /// Component sizes in decreasing order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

/// ℓ∞ diameter of `C_v` in the embedding. Rejected on tori.
pub fn radius(g: &MultiGraph, cl: &Clusters, v: usize) -> Result<i64> {
    if g.is_torus() {
        return Err(Error::Incompatible("radius on a torus".into()));
    }
    if !g.has_embedding() {
        return Err(Error::Incompatible("radius needs coordinates".into()));
    }
    let d = g.dimension();
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for u in cl.members(v) {
        for (i, &x) in g.coords(u).unwrap().iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    Ok((0..d).map(|i| hi[i] - lo[i]).max().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case", tag = "name", deny_unknown_fields)]
pub enum Observable {
    PConnect { v: usize, w: usize },
    /// `v ↔ ∂Λ_k(v)`: the cluster of `v` reaches ℓ∞ distance `k`.
    PReachBoundary { v: usize, k: i64 },
    MeanClusterSize { v: usize },
    MeanRadius { v: usize },
    /// `|C_NT| / |V|`, which equals the probability that a fixed vertex lies in
    /// `C_NT` by translation invariance.
    PInCnt,
    /// Fraction of edges lying in `C_NT`.
    CntDensity,
    EdgeOpen { e: usize },
    WraparoundLb,
}

impl Observable {
    pub fn label(&self) -> String {
        match self {
            Observable::PConnect { v, w } => format!("p_connect({v},{w})"),
            Observable::PReachBoundary { v, k } => format!("p_reach_boundary({v},{k})"),
            Observable::MeanClusterSize { v } => format!("mean_cluster_size({v})"),
            Observable::MeanRadius { v } => format!("mean_radius({v})"),
            Observable::PInCnt => "p_in_cnt".into(),
            Observable::CntDensity => "cnt_density".into(),
            Observable::EdgeOpen { e } => format!("edge_open({e})"),
            Observable::WraparoundLb => "wraparound_lb".into(),
        }
    }

    fn needs_torus(&self) -> bool {
        matches!(self, Observable::PInCnt | Observable::CntDensity | Observable::WraparoundLb)
    }

    /// Checks that the observable makes sense on `g`.
    pub fn check(&self, g: &MultiGraph) -> Result<()> {
        let nv = g.vertex_count();
        let vertex = |v: usize| {
            if v < nv {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("vertex {v} out of range")))
            }
        };
        if self.needs_torus() && !g.is_torus() {
            return Err(Error::Incompatible(format!("{} needs a torus host", self.label())));
        }
        match *self {
            Observable::PConnect { v, w } => {
                vertex(v)?;
                vertex(w)
            }
            Observable::PReachBoundary { v, k } => {
                vertex(v)?;
                if !g.has_embedding() {
                    return Err(Error::Incompatible("boundary distance needs coordinates".into()));
                }
                if k < 0 {
                    return Err(Error::InvalidArgument("negative distance".into()));
                }
                Ok(())
            }
            Observable::MeanClusterSize { v } => vertex(v),
            Observable::MeanRadius { v } => {
                vertex(v)?;
                if g.is_torus() || !g.has_embedding() {
                    return Err(Error::Incompatible("radius needs a non-periodic embedding".into()));
                }
                Ok(())
            }
            Observable::EdgeOpen { e } if e >= g.edge_count() => {
                Err(Error::InvalidArgument(format!("edge {e} out of range")))
            }
            _ => Ok(()),
        }
    }
}

/// Evaluates several observables on one sample, sharing the clustering.
struct Evaluator<'a> {
    graph: &'a MultiGraph,
    observables: &'a [Observable],
    plane: Option<Hyperplane>,
}

impl<'a> Evaluator<'a> {
    fn new(g: &'a MultiGraph, observables: &'a [Observable]) -> Result<Self> {
        for o in observables {
            o.check(g)?;
        }
        let plane = if observables.iter().any(Observable::needs_torus) {
            Some(hyperplane(g, 0)?)
        } else {
            None
        };
        Ok(Self {
            graph: g,
            observables,
            plane,
        })
    }

    fn eval(&self, c: &EdgeConfig, out: &mut [f64]) {
        let g = self.graph;
        let cl = clusters(g, c);
        let report = self
            .plane
            .as_ref()
            .map(|h| classify_components(g, c, h).expect("validated torus host"));
        for (o, slot) in self.observables.iter().zip(out.iter_mut()) {
            *slot = match *o {
                Observable::PConnect { v, w } => cl.connected(v, w) as u8 as f64,
                Observable::PReachBoundary { v, k } => {
                    let far = cl.members(v).into_iter().filter_map(|u| linf_distance(g, v, u)).max().unwrap_or(0);
                    (far >= k) as u8 as f64
                }
                Observable::MeanClusterSize { v } => cl.size_of(v) as f64,
                Observable::MeanRadius { v } => radius(g, &cl, v).expect("validated host") as f64,
                Observable::PInCnt => report.as_ref().unwrap().cnt_size() as f64 / g.vertex_count() as f64,
                Observable::CntDensity => report.as_ref().unwrap().cnt_edges.count() as f64 / g.edge_count() as f64,
                Observable::EdgeOpen { e } => c.contains(e) as u8 as f64,
                Observable::WraparoundLb => {
                    count_disjoint_wraparounds(g, c, self.plane.as_ref().unwrap()).expect("validated torus host")
                        as f64
                }
            };
        }
    }
}

/// Where samples come from.
#[derive(Clone, Copy, Debug)]
pub struct SamplerSpec<'a> {
    pub graph: &'a MultiGraph,
    pub bc: Option<&'a BoundaryCondition>,
    pub model: Model,
    pub backend: Backend,
}

impl<'a> SamplerSpec<'a> {
    pub fn new(graph: &'a MultiGraph, bc: Option<&'a BoundaryCondition>, model: Model, backend: Backend) -> Self {
        Self {
            graph,
            bc,
            model,
            backend,
        }
    }
}

/// Batch layout of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunShape {
    pub samples: usize,
    pub batches: usize,
    pub seed: u64,
}

impl RunShape {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            batches: DEFAULT_BATCHES,
            seed,
        }
    }

    pub fn with_batches(mut self, batches: usize) -> Self {
        self.batches = batches;
        self
    }

    pub fn batch_size(&self) -> usize {
        self.samples / self.batches
    }

    fn check(&self) -> Result<()> {
        if self.batches < MIN_BATCHES {
            return Err(Error::InvalidArgument(format!(
                "{} batches; at least {MIN_BATCHES} are needed",
                self.batches
            )));
        }
        if self.samples < self.batches {
            return Err(Error::InvalidArgument("fewer samples than batches".into()));
        }
        Ok(())
    }
}

/// Runs the sampler and returns, per batch, the mean of each statistic
/// computed by `stat` (which fills a slice of length `width`).
pub fn batch_means<F>(spec: &SamplerSpec<'_>, shape: RunShape, width: usize, stat: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&EdgeConfig, Option<&EdgeConfig>, &mut [f64]) + Sync,
{
    shape.check()?;
    let proto = ConfigSampler::new(spec.graph, spec.bc, spec.model, spec.backend)?;
    let per = shape.batch_size();
    let iid = matches!(spec.backend, Backend::Exact) || matches!(spec.model, Model::Bernoulli { .. });
    Ok((0..shape.batches)
        .into_par_iter()
        .map(|b| {
            let mut sampler = proto.clone();
            let mut sums = vec![0.0; width];
            let mut buf = vec![0.0; width];
            let mut chain_rng = stream(shape.seed, b as u64);
            for i in 0..per {
                let (c, ambient) = if iid {
                    let mut rng = stream(shape.seed, (b * per + i) as u64);
                    sampler.next_with_ambient(&mut rng)
                } else {
                    sampler.next_with_ambient(&mut chain_rng)
                };
                stat(&c, ambient.as_ref(), &mut buf);
                for (s, x) in sums.iter_mut().zip(&buf) {
                    *s += x;
                }
            }
            sums.into_iter().map(|s| s / per as f64).collect()
        })
        .collect())
}

/// Mean and standard error of a list of batch means.
pub fn mean_stderr(means: &[f64]) -> (f64, f64) {
    let b = means.len() as f64;
    let m = means.iter().sum::<f64>() / b;
    if means.len() < 2 {
        return (m, f64::NAN);
    }
    let var = means.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (b - 1.0);
    (m, (var / b).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub observable: Observable,
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub batches: usize,
    pub seed: u64,
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

/// Estimates all observables from one shared run.
pub fn estimate_all(spec: &SamplerSpec<'_>, observables: &[Observable], shape: RunShape) -> Result<Vec<Estimate>> {
    let ev = Evaluator::new(spec.graph, observables)?;
    let rows = batch_means(spec, shape, observables.len(), |c, _, out| ev.eval(c, out))?;
    Ok(observables
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let (estimate, stderr) = mean_stderr(&column(&rows, j));
            Estimate {
                observable: o.clone(),
                estimate,
                stderr,
                n_samples: shape.batch_size() * shape.batches,
                batches: shape.batches,
                seed: shape.seed,
            }
        })
        .collect())
}

pub fn estimate(spec: &SamplerSpec<'_>, observable: &Observable, shape: RunShape) -> Result<Estimate> {
    Ok(estimate_all(spec, std::slice::from_ref(observable), shape)?.remove(0))
}

/// A local event on the edges of a window graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case", tag = "kind", content = "edges")]
pub enum Event {
    AllOpen(Vec<usize>),
    AnyOpen(Vec<usize>),
    AllClosed(Vec<usize>),
}

impl Event {
    pub fn edge_open(e: usize) -> Self {
        Event::AllOpen(vec![e])
    }

    fn edges(&self) -> &[usize] {
        match self {
            Event::AllOpen(v) | Event::AnyOpen(v) | Event::AllClosed(v) => v,
        }
    }

    /// Evaluates the event with window edge `i` read at host edge `map[i]`.
    pub fn holds(&self, c: &EdgeConfig, map: &[usize]) -> bool {
        match self {
            Event::AllOpen(v) => v.iter().all(|&i| c.contains(map[i])),
            Event::AnyOpen(v) => v.iter().any(|&i| c.contains(map[i])),
            Event::AllClosed(v) => v.iter().all(|&i| !c.contains(map[i])),
        }
    }

    fn check(&self, window: &MultiGraph) -> Result<()> {
        match self.edges().iter().find(|&&e| e >= window.edge_count()) {
            Some(e) => Err(Error::InvalidArgument(format!("event edge {e} outside the window"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingGap {
    pub p_a: f64,
    pub stderr_a: f64,
    pub p_b: f64,
    pub stderr_b: f64,
    /// `|P̂_A − P̂_B|`.
    pub gap: f64,
    /// Batch-means standard error of `P̂_A − P̂_B`; both hosts use the same
    /// batch streams, so batches are paired.
    pub stderr: f64,
    pub n_samples: usize,
}

fn window_map(window: &MultiGraph, host: &MultiGraph) -> Result<Vec<usize>> {
    if window.edge_count() == host.edge_count() && window.edges().eq(host.edges()) {
        return Ok((0..host.edge_count()).collect());
    }
    host.embed_edges(window)
}

fn event_rate(spec: &SamplerSpec<'_>, window: &MultiGraph, event: &Event, shape: RunShape) -> Result<Vec<f64>> {
    let map = window_map(window, spec.graph)?;
    let rows = batch_means(spec, shape, 1, |c, _, out| out[0] = event.holds(c, &map) as u8 as f64)?;
    Ok(column(&rows, 0))
}

/// Difference of the probabilities of a window event under two samplers.
pub fn mixing_gap(
    window: &MultiGraph,
    event: &Event,
    a: &SamplerSpec<'_>,
    b: &SamplerSpec<'_>,
    shape: RunShape,
) -> Result<MixingGap> {
    event.check(window)?;
    let ra = event_rate(a, window, event, shape)?;
    let rb = event_rate(b, window, event, shape)?;
    let (p_a, stderr_a) = mean_stderr(&ra);
    let (p_b, stderr_b) = mean_stderr(&rb);
    let diff: Vec<f64> = ra.iter().zip(&rb).map(|(x, y)| x - y).collect();
    let (d, stderr) = mean_stderr(&diff);
    Ok(MixingGap {
        p_a,
        stderr_a,
        p_b,
        stderr_b,
        gap: d.abs(),
        stderr,
        n_samples: shape.batch_size() * shape.batches,
    })
}

/// `|P̂[A ∩ B] − P̂[A] P̂[B]|` with a batch-means error bar.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationGap {
    pub p_ab: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub gap: f64,
    pub stderr: f64,
    pub n_samples: usize,
}

pub fn factorization_gap(
    window: &MultiGraph,
    event_a: &Event,
    event_b: &Event,
    spec: &SamplerSpec<'_>,
    shape: RunShape,
) -> Result<FactorizationGap> {
    event_a.check(window)?;
    event_b.check(window)?;
    let map = window_map(window, spec.graph)?;
    let rows = batch_means(spec, shape, 3, |c, _, out| {
        let (x, y) = (event_a.holds(c, &map), event_b.holds(c, &map));
        out[0] = (x && y) as u8 as f64;
        out[1] = x as u8 as f64;
        out[2] = y as u8 as f64;
    })?;
    let per_batch: Vec<f64> = rows.iter().map(|r| r[0] - r[1] * r[2]).collect();
    let (_, stderr) = mean_stderr(&per_batch);
    let (p_ab, _) = mean_stderr(&column(&rows, 0));
    let (p_a, _) = mean_stderr(&column(&rows, 1));
    let (p_b, _) = mean_stderr(&column(&rows, 2));
    Ok(FactorizationGap {
        p_ab,
        p_a,
        p_b,
        gap: (p_ab - p_a * p_b).abs(),
        stderr,
        n_samples: shape.batch_size() * shape.batches,
    })
}

/// One CSV line of an estimate together with its run description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub observable: String,
    pub host: String,
    pub d: usize,
    pub n: usize,
    pub model: String,
    pub beta: Option<f64>,
    pub p: Option<f64>,
    pub x: Option<f64>,
    pub bc: String,
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl EstimateRow {
    pub const HEADER: [&'static str; 13] = [
        "observable",
        "host",
        "d",
        "n",
        "model",
        "beta",
        "p",
        "x",
        "bc",
        "estimate",
        "stderr",
        "n_samples",
        "seed",
    ];

    pub fn new(est: &Estimate, host: &str, d: usize, n: usize, model: &Model, bc: &str) -> Self {
        let params = model.params();
        Self {
            observable: est.observable.label(),
            host: host.into(),
            d,
            n,
            model: model.name().into(),
            beta: params.map(|m| m.beta),
            p: params.map(|m| m.p),
            x: params.map(|m| m.x),
            bc: bc.into(),
            estimate: est.estimate,
            stderr: est.stderr,
            n_samples: est.n_samples,
            seed: est.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_box, build_torus};

    fn grid3() -> MultiGraph {
        build_box(2, 1).unwrap()
    }

    #[test]
    fn cluster_examples() {
        let g = grid3();
        let cl = clusters(&g, &EdgeConfig::empty(g.edge_count()));
        assert_eq!(cl.count(), 9);
        let cl = clusters(&g, &EdgeConfig::full(g.edge_count()));
        assert_eq!(cl.sizes(), vec![9]);
        // plaquette with lower-left corner (-1,-1)
        let v = g.find_vertex(&[-1, -1]).unwrap();
        let r = g.find_vertex(&[0, -1]).unwrap();
        let u = g.find_vertex(&[-1, 0]).unwrap();
        let w = g.find_vertex(&[0, 0]).unwrap();
        let pl = EdgeConfig::from_indices(
            g.edge_count(),
            [g.find_edge(v, r), g.find_edge(v, u), g.find_edge(r, w), g.find_edge(u, w)].map(Option::unwrap),
        );
        let cl = clusters(&g, &pl);
        assert_eq!(cl.sizes(), vec![4, 1, 1, 1, 1, 1]);
        assert!(cl.connected(v, w));
        assert_eq!(cl.members(w), vec![v, r, u, w].into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect::<Vec<_>>());
        assert_eq!(radius(&g, &cl, v).unwrap(), 1);
        assert_eq!(radius(&g, &clusters(&g, &EdgeConfig::full(12)), v).unwrap(), 2);
    }

    #[test]
    fn zero_temperature_loops_are_empty() {
        let g = grid3();
        let spec = SamplerSpec::new(&g, None, Model::Loop { x: 0.0 }, Backend::default());
        let obs = [
            Observable::PConnect { v: 0, w: 8 },
            Observable::PReachBoundary { v: 4, k: 1 },
            Observable::MeanClusterSize { v: 4 },
            Observable::MeanRadius { v: 4 },
        ];
        let est = estimate_all(&spec, &obs, RunShape::new(64, 3)).unwrap();
        assert_eq!(est[0].estimate, 0.0);
        assert_eq!(est[1].estimate, 0.0);
        assert_eq!(est[2].estimate, 1.0);
        assert_eq!(est[3].estimate, 0.0);
        assert!(est.iter().all(|e| e.stderr == 0.0));
    }

    #[test]
    fn uniform_even_cycle_antipodes() {
        let g = MultiGraph::cycle(6).unwrap();
        let spec = SamplerSpec::new(&g, None, Model::Loop { x: 1.0 }, Backend::Exact);
        let e = estimate(&spec, &Observable::PConnect { v: 0, w: 3 }, RunShape::new(32_000, 5)).unwrap();
        assert!((e.estimate - 0.5).abs() < 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn observables_checked_against_host() {
        let b = grid3();
        let t = build_torus(2, 1).unwrap();
        assert!(Observable::PInCnt.check(&b).is_err());
        assert!(Observable::PInCnt.check(&t).is_ok());
        assert!(Observable::MeanRadius { v: 0 }.check(&t).is_err());
        assert!(Observable::PConnect { v: 0, w: 99 }.check(&b).is_err());
        assert!(Observable::EdgeOpen { e: 12 }.check(&b).is_err());
        let spec = SamplerSpec::new(&b, None, Model::Loop { x: 0.5 }, Backend::Exact);
        assert!(estimate(&spec, &Observable::CntDensity, RunShape::new(64, 0)).is_err());
        assert!(estimate(&spec, &Observable::EdgeOpen { e: 0 }, RunShape::new(64, 0).with_batches(8)).is_err());
    }

    #[test]
    fn results_ignore_thread_count() {
        let g = build_torus(2, 2).unwrap();
        let spec = SamplerSpec::new(&g, None, Model::Loop { x: 0.7 }, Backend::default());
        let obs = [Observable::PInCnt, Observable::CntDensity, Observable::MeanClusterSize { v: 0 }];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_all(&spec, &obs, RunShape::new(320, 9)).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn identical_samplers_have_zero_gap() {
        let g = grid3();
        let spec = SamplerSpec::new(&g, None, Model::Loop { x: 0.8 }, Backend::default());
        let gap = mixing_gap(&g, &Event::edge_open(0), &spec, &spec, RunShape::new(320, 1)).unwrap();
        assert_eq!((gap.gap, gap.stderr), (0.0, 0.0));
        assert!(gap.p_a > 0.0);
    }

    #[test]
    fn window_embedding_is_used() {
        let small = grid3();
        let big = build_box(2, 2).unwrap();
        let wired = BoundaryCondition::wired(&big);
        let a = SamplerSpec::new(&big, None, Model::Bernoulli { q: 1.0 }, Backend::Exact);
        let b = SamplerSpec::new(&big, Some(&wired), Model::Bernoulli { q: 0.0 }, Backend::Exact);
        let gap = mixing_gap(&small, &Event::AllOpen((0..12).collect()), &a, &b, RunShape::new(32, 0)).unwrap();
        assert_eq!(gap.gap, 1.0);
        assert!(mixing_gap(&small, &Event::edge_open(12), &a, &b, RunShape::new(32, 0)).is_err());
    }

    #[test]
    fn factorization_of_independent_edges() {
        let g = grid3();
        let spec = SamplerSpec::new(&g, None, Model::Bernoulli { q: 0.3 }, Backend::Exact);
        let f = factorization_gap(&g, &Event::edge_open(0), &Event::edge_open(11), &spec, RunShape::new(32_000, 2))
            .unwrap();
        assert!(f.gap < 4.0 * f.stderr + 1e-3, "{f:?}");
        assert!((f.p_a - 0.3).abs() < 0.02);
    }

    #[test]
    fn batch_stderr_formula() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[2.0; 16]), (2.0, 0.0));
    }

    #[test]
    fn rows_carry_parameters() {
        let est = Estimate {
            observable: Observable::PInCnt,
            estimate: 0.25,
            stderr: 0.01,
            n_samples: 320,
            batches: 32,
            seed: 4,
        };
        let row = EstimateRow::new(&est, "torus", 2, 4, &Model::Loop { x: 0.6 }, "free");
        assert_eq!(row.model, "loop");
        assert!((row.p.unwrap() - 1.2 / 1.6).abs() < 1e-15);
        assert_eq!(EstimateRow::HEADER.len(), 13);
    }
}
