//! Parameters, weights and samplers for the random-cluster model (`q = 2`),
//! the loop O(1) model, traced random currents, Bernoulli percolation and the
//! Ising model.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{EdgeConfig, SpinConfig};
use crate::error::{Error, Result};
use crate::evens::{sample_ueg, source_map};
use crate::lattice::{quotient, BoundaryCondition, MultiGraph, Quotient};
use crate::unionfind::DisjointSet;

/// The coupled triple `(β, p, x)` with `p = 1 − e^{−2β}` and `x = tanh β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub p: f64,
    pub x: f64,
}

/// Which coordinate a [`ModelParams`] is built from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Beta(f64),
    P(f64),
    X(f64),
}

impl ModelParams {
    pub fn convert(param: Param) -> Result<Self> {
        match param {
            Param::Beta(b) => Self::from_beta(b),
            Param::P(p) => Self::from_p(p),
            Param::X(x) => Self::from_x(x),
        }
    }

    /// `β ∈ [0, ∞]`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::ParameterOutOfRange(format!("beta = {beta}")));
        }
        if beta == f64::INFINITY {
            return Ok(Self { beta, p: 1.0, x: 1.0 });
        }
        Ok(Self {
            beta,
            p: -(-2.0 * beta).exp_m1(),
            x: beta.tanh(),
        })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParameterOutOfRange(format!("p = {p}")));
        }
        if p == 1.0 {
            return Ok(Self {
                beta: f64::INFINITY,
                p,
                x: 1.0,
            });
        }
        Ok(Self {
            beta: -0.5 * (-p).ln_1p(),
            p,
            x: p / (2.0 - p),
        })
    }

    pub fn from_x(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::ParameterOutOfRange(format!("x = {x}")));
        }
        if x == 1.0 {
            return Ok(Self {
                beta: f64::INFINITY,
                p: 1.0,
                x,
            });
        }
        Ok(Self {
            beta: x.atanh(),
            p: 2.0 * x / (1.0 + x),
            x,
        })
    }

    /// Density `1 − 1/cosh β` of the Bernoulli sprinkling that turns loops
    /// into traced currents.
    pub fn current_density(&self) -> f64 {
        if self.beta == f64::INFINITY {
            1.0
        } else {
            1.0 - 1.0 / self.beta.cosh()
        }
    }
}

/// The dual random-cluster parameter: `p p* / ((1 − p)(1 − p*)) = 2`.
pub fn dual_parameter(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("dual of p = {p}")));
    }
    Ok(2.0 * (1.0 - p) / (2.0 - p))
}

/// Inverse temperature of the Ising model on the faces whose interfaces form
/// the loop model at `x`: `e^{−2β*} = x`.
pub fn interface_beta(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!("x = {x}")));
    }
    Ok(-0.5 * x.ln())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("{name} = {v}")))
    }
}

fn kappa(g: &MultiGraph, c: &EdgeConfig) -> usize {
    let mut uf = DisjointSet::new(g.vertex_count());
    for e in c.iter() {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    uf.components()
}

fn quotient_of(g: &MultiGraph, bc: Option<&BoundaryCondition>) -> Result<Quotient> {
    match bc {
        Some(bc) => quotient(g, bc),
        None => Ok(Quotient {
            graph: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
        }),
    }
}

/// `ln(2^{κ(c^ξ)} p^{o(c)} (1 − p)^{|E| − o(c)})`, the random-cluster weight
/// up to the constant `(1 − p)^{|E|}`; finite at `p ∈ {0, 1}`.
pub fn log_weight_rc(g: &MultiGraph, c: &EdgeConfig, bc: Option<&BoundaryCondition>, p: f64) -> Result<f64> {
    check_unit("p", p)?;
    let q = quotient_of(g, bc)?;
    let o = c.count() as f64;
    let closed = g.edge_count() as f64 - o;
    let term = |n: f64, v: f64| if n == 0.0 { 0.0 } else { n * v.ln() };
    Ok(kappa(&q.graph, c) as f64 * std::f64::consts::LN_2 + term(o, p) + term(closed, 1.0 - p))
}

/// `2^{κ(c^ξ)} (p/(1 − p))^{o(c)}`. At `p = 1` the ratio form degenerates and
/// the weight is `2^κ` on the full configuration and 0 elsewhere.
pub fn weight_rc(g: &MultiGraph, c: &EdgeConfig, bc: Option<&BoundaryCondition>, p: f64) -> Result<f64> {
    check_unit("p", p)?;
    let q = quotient_of(g, bc)?;
    let k = kappa(&q.graph, c) as i32;
    if p == 1.0 {
        return Ok(if c.count() == g.edge_count() { 2f64.powi(k) } else { 0.0 });
    }
    Ok(2f64.powi(k) * (p / (1.0 - p)).powi(c.count() as i32))
}

/// `exp(β Σ_{vw ∈ E} σ_v σ_w)`.
pub fn weight_ising(g: &MultiGraph, s: &SpinConfig, beta: f64) -> f64 {
    log_weight_ising(g, s, beta).exp()
}

pub fn log_weight_ising(g: &MultiGraph, s: &SpinConfig, beta: f64) -> f64 {
    let agree: i64 = g.edges().map(|(a, b)| (s.spin(a) * s.spin(b)) as i64).sum();
    beta * agree as f64
}

/// `x^{o(c)} 1{∂c^ξ = ∅}`.
pub fn weight_loop(g: &MultiGraph, c: &EdgeConfig, bc: Option<&BoundaryCondition>, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    let q = quotient_of(g, bc)?;
    if !source_map(&q.graph, c).is_empty() {
        return Ok(0.0);
    }
    Ok(x.powi(c.count() as i32))
}

/// Edge multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Current {
    pub mult: Vec<u32>,
}

impl Current {
    pub fn sources(&self, g: &MultiGraph) -> crate::bits::SourceSet {
        source_map(g, &self.odd_part())
    }

    fn odd_part(&self) -> EdgeConfig {
        EdgeConfig::from_indices(self.mult.len(), self.mult.iter().enumerate().filter(|(_, &m)| m % 2 == 1).map(|(e, _)| e))
    }

    /// Edges carrying positive multiplicity.
    pub fn trace(&self) -> EdgeConfig {
        EdgeConfig::from_indices(self.mult.len(), self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(e, _)| e))
    }
}

/// `∏ β^{n_e}/n_e! · 1{∂n = ∅}`.
pub fn weight_current(g: &MultiGraph, n: &Current, beta: f64) -> f64 {
    if !n.sources(g).is_empty() {
        return 0.0;
    }
    n.mult
        .iter()
        .map(|&k| (1..=k).fold(1.0, |w, i| w * beta / i as f64))
        .product()
}

/// Independent Bernoulli(`q`) edges.
pub fn sample_bernoulli<R: Rng + ?Sized>(g: &MultiGraph, q: f64, rng: &mut R) -> Result<EdgeConfig> {
    check_unit("q", q)?;
    let mut c = EdgeConfig::empty(g.edge_count());
    bernoulli_into(&mut c, q, rng);
    Ok(c)
}

fn bernoulli_into<R: Rng + ?Sized>(c: &mut EdgeConfig, q: f64, rng: &mut R) {
    for e in 0..c.len() {
        if rng.random::<f64>() < q {
            c.set(e, true);
        }
    }
}

/// Swendsen–Wang dynamics for the random-cluster measure, run on the
/// quotient graph so that wired classes share one spin.
#[derive(Clone, Debug)]
pub struct SwendsenWang {
    graph: MultiGraph,
    p: f64,
    state: EdgeConfig,
    uf: DisjointSet,
    spin: Vec<bool>,
}

pub const SW_BURN_IN: usize = 64;
pub const SW_THIN: usize = 4;

impl SwendsenWang {
    /// Starts from the full configuration.
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, p: f64) -> Result<Self> {
        check_unit("p", p)?;
        let q = quotient_of(g, bc)?;
        let n = q.graph.vertex_count();
        let m = q.graph.edge_count();
        Ok(Self {
            graph: q.graph,
            p,
            state: if p == 0.0 { EdgeConfig::empty(m) } else { EdgeConfig::full(m) },
            uf: DisjointSet::new(n),
            spin: vec![false; n],
        })
    }

    pub fn state(&self) -> &EdgeConfig {
        &self.state
    }

    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if self.p == 0.0 || self.p == 1.0 {
            return;
        }
        self.uf.reset(self.graph.vertex_count());
        for e in self.state.iter() {
            let (a, b) = self.graph.edge(e);
            self.uf.union(a, b);
        }
        let mut word = 0u64;
        let mut left = 0;
        for v in 0..self.graph.vertex_count() {
            if self.uf.find(v) == v {
                if left == 0 {
                    word = rng.next_u64();
                    left = 64;
                }
                self.spin[v] = word & 1 == 1;
                word >>= 1;
                left -= 1;
            }
        }
        for v in 0..self.graph.vertex_count() {
            let r = self.uf.find(v);
            self.spin[v] = self.spin[r];
        }
        let mut next = EdgeConfig::empty(self.graph.edge_count());
        for (e, (a, b)) in self.graph.edges().enumerate() {
            if self.spin[a] == self.spin[b] && rng.random::<f64>() < self.p {
                next.set(e, true);
            }
        }
        self.state = next;
    }

    pub fn run<R: Rng + ?Sized>(&mut self, sweeps: usize, rng: &mut R) -> &EdgeConfig {
        for _ in 0..sweeps {
            self.sweep(rng);
        }
        &self.state
    }
}

/// One random-cluster sample after `sweeps` Swendsen–Wang sweeps.
pub fn sample_rc_sw<R: Rng + ?Sized>(
    g: &MultiGraph,
    bc: Option<&BoundaryCondition>,
    p: f64,
    sweeps: usize,
    rng: &mut R,
) -> Result<EdgeConfig> {
    let mut sw = SwendsenWang::new(g, bc, p)?;
    Ok(sw.run(sweeps, rng).clone())
}

pub const EXACT_EDGE_CAP: usize = 24;

/// Perfect random-cluster sampler by sequential conditioning: edge `j` opens
/// iff `U_j < P[ω_j = 1 | ω_0, …, ω_{j−1}]`. Feeding the same uniforms at two
/// parameters `p_1 ≤ p_2` gives nested samples.
#[derive(Clone, Debug)]
pub struct RcExactSampler {
    m: usize,
    /// Level `j` (prefixes of length `j`) starts at offset `2^j − 1`.
    sums: Arc<Vec<f64>>,
}

impl RcExactSampler {
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, p: f64) -> Result<Self> {
        check_unit("p", p)?;
        let m = g.edge_count();
        if m > EXACT_EDGE_CAP {
            return Err(Error::CapExceeded {
                what: "edge count",
                actual: m,
                limit: EXACT_EDGE_CAP,
            });
        }
        let q = quotient_of(g, bc)?;
        let n = q.graph.vertex_count();
        let mut sums = vec![0.0; (1usize << (m + 1)) - 1];
        let top = (1usize << m) - 1;
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        let mut uf = DisjointSet::new(n);
        for mask in 0..(1usize << m) {
            let o = mask.count_ones() as usize;
            let w = if (p == 0.0 && o > 0) || (p == 1.0 && o < m) {
                0.0
            } else {
                uf.reset(n);
                for e in (0..m).filter(|e| mask >> e & 1 == 1) {
                    let (a, b) = q.graph.edge(e);
                    uf.union(a, b);
                }
                let lw = (uf.components() as f64 - n as f64) * std::f64::consts::LN_2
                    + if o > 0 { o as f64 * lp } else { 0.0 }
                    + if o < m { (m - o) as f64 * lq } else { 0.0 };
                lw.exp()
            };
            sums[top + mask] = w;
        }
        for j in (0..m).rev() {
            let (lo, hi) = ((1usize << j) - 1, (1usize << (j + 1)) - 1);
            for pre in 0..(1usize << j) {
                sums[lo + pre] = sums[hi + pre] + sums[hi + (pre | 1 << j)];
            }
        }
        Ok(Self { m, sums: Arc::new(sums) })
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Exact probability of the configuration with edge mask `mask`.
    pub fn prob(&self, mask: u64) -> f64 {
        self.sums[(1usize << self.m) - 1 + mask as usize] / self.sums[0]
    }

    /// Samples from explicit uniforms `u[0..m]`.
    pub fn sample_with(&self, u: &[f64]) -> EdgeConfig {
        assert_eq!(u.len(), self.m);
        let mut pre = 0usize;
        for (j, &uj) in u.iter().enumerate() {
            let lo = (1usize << j) - 1;
            let hi = (1usize << (j + 1)) - 1;
            let t = sums_ratio(self.sums[hi + (pre | 1 << j)], self.sums[lo + pre]);
            if uj < t {
                pre |= 1 << j;
            }
        }
        EdgeConfig::from_mask(self.m, pre as u64)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> EdgeConfig {
        let u: Vec<f64> = (0..self.m).map(|_| rng.random::<f64>()).collect();
        self.sample_with(&u)
    }
}

fn sums_ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

pub fn sample_rc_exact<R: Rng + ?Sized>(
    g: &MultiGraph,
    bc: Option<&BoundaryCondition>,
    p: f64,
    rng: &mut R,
) -> Result<EdgeConfig> {
    Ok(RcExactSampler::new(g, bc, p)?.sample(rng))
}

/// How random-cluster configurations are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Backend {
    Exact,
    Sw { burn_in: usize, thin: usize },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Sw {
            burn_in: SW_BURN_IN,
            thin: SW_THIN,
        }
    }
}

/// A stream of random-cluster samples: i.i.d. for the exact backend, a
/// thinned Markov chain for Swendsen–Wang.
#[derive(Clone, Debug)]
pub enum RcSampler {
    Exact(RcExactSampler),
    Sw {
        chain: SwendsenWang,
        burn_in: usize,
        thin: usize,
        started: bool,
    },
}

impl RcSampler {
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, p: f64, backend: Backend) -> Result<Self> {
        Ok(match backend {
            Backend::Exact => RcSampler::Exact(RcExactSampler::new(g, bc, p)?),
            Backend::Sw { burn_in, thin } => RcSampler::Sw {
                chain: SwendsenWang::new(g, bc, p)?,
                burn_in,
                thin: thin.max(1),
                started: false,
            },
        })
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeConfig {
        match self {
            RcSampler::Exact(s) => s.sample(rng),
            RcSampler::Sw {
                chain,
                burn_in,
                thin,
                started,
            } => {
                let n = if *started { *thin } else { *burn_in };
                *started = true;
                chain.run(n, rng).clone()
            }
        }
    }
}

/// Loop O(1) samples as uniform even subgraphs of random-cluster samples at
/// `p = 2x/(1 + x)`.
#[derive(Clone, Debug)]
pub struct LoopSampler {
    graph: MultiGraph,
    rc: RcSampler,
}

impl LoopSampler {
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, x: f64, backend: Backend) -> Result<Self> {
        let params = ModelParams::from_x(x)?;
        Ok(Self {
            graph: quotient_of(g, bc)?.graph,
            rc: RcSampler::new(g, bc, params.p, backend)?,
        })
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeConfig {
        let omega = self.rc.next(rng);
        sample_ueg(&self.graph, &omega, rng)
    }

    /// The random-cluster configuration together with its loop sample.
    pub fn next_pair<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (EdgeConfig, EdgeConfig) {
        let omega = self.rc.next(rng);
        let eta = sample_ueg(&self.graph, &omega, rng);
        (omega, eta)
    }
}

pub fn sample_loop<R: Rng + ?Sized>(
    g: &MultiGraph,
    bc: Option<&BoundaryCondition>,
    x: f64,
    rng: &mut R,
    backend: Backend,
) -> Result<EdgeConfig> {
    Ok(LoopSampler::new(g, bc, x, backend)?.next(rng))
}

/// Traced sourceless current: a loop sample at `x = tanh β` joined with
/// independent Bernoulli(`1 − 1/cosh β`) edges.
#[derive(Clone, Debug)]
pub struct CurrentSampler {
    loops: LoopSampler,
    density: f64,
}

impl CurrentSampler {
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, beta: f64, backend: Backend) -> Result<Self> {
        let params = ModelParams::from_beta(beta)?;
        Ok(Self {
            loops: LoopSampler::new(g, bc, params.x, backend)?,
            density: params.current_density(),
        })
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeConfig {
        let mut c = self.loops.next(rng);
        bernoulli_into(&mut c, self.density, rng);
        c
    }
}

pub fn sample_current<R: Rng + ?Sized>(g: &MultiGraph, beta: f64, rng: &mut R, backend: Backend) -> Result<EdgeConfig> {
    Ok(CurrentSampler::new(g, None, beta, backend)?.next(rng))
}

/// Union of two independent traced currents.
pub fn sample_double_current<R: Rng + ?Sized>(
    g: &MultiGraph,
    beta: f64,
    rng: &mut R,
    backend: Backend,
) -> Result<EdgeConfig> {
    let a = CurrentSampler::new(g, None, beta, backend)?.next(rng);
    let b = CurrentSampler::new(g, None, beta, backend)?.next(rng);
    Ok(a.union(&b))
}

/// The measures that produce edge configurations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Model {
    Bernoulli { q: f64 },
    RandomCluster { p: f64 },
    Loop { x: f64 },
    Current { beta: f64 },
    DoubleCurrent { beta: f64 },
}

impl Model {
    pub fn params(&self) -> Option<ModelParams> {
        match *self {
            Model::Bernoulli { .. } => None,
            Model::RandomCluster { p } => ModelParams::from_p(p).ok(),
            Model::Loop { x } => ModelParams::from_x(x).ok(),
            Model::Current { beta } | Model::DoubleCurrent { beta } => ModelParams::from_beta(beta).ok(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Bernoulli { .. } => "bernoulli",
            Model::RandomCluster { .. } => "random-cluster",
            Model::Loop { .. } => "loop",
            Model::Current { .. } => "current",
            Model::DoubleCurrent { .. } => "double-current",
        }
    }
}

/// A sampler for any [`Model`]. Besides the sample it reports the ambient
/// random-cluster configuration when there is one.
#[derive(Clone, Debug)]
pub enum ConfigSampler {
    Bernoulli { m: usize, q: f64 },
    Rc(RcSampler),
    Loop(LoopSampler),
    Current(CurrentSampler),
    Double(Box<(CurrentSampler, CurrentSampler)>),
}

impl ConfigSampler {
    pub fn new(g: &MultiGraph, bc: Option<&BoundaryCondition>, model: Model, backend: Backend) -> Result<Self> {
        Ok(match model {
            Model::Bernoulli { q } => {
                check_unit("q", q)?;
                ConfigSampler::Bernoulli { m: g.edge_count(), q }
            }
            Model::RandomCluster { p } => ConfigSampler::Rc(RcSampler::new(g, bc, p, backend)?),
            Model::Loop { x } => ConfigSampler::Loop(LoopSampler::new(g, bc, x, backend)?),
            Model::Current { beta } => ConfigSampler::Current(CurrentSampler::new(g, bc, beta, backend)?),
            Model::DoubleCurrent { beta } => ConfigSampler::Double(Box::new((
                CurrentSampler::new(g, bc, beta, backend)?,
                CurrentSampler::new(g, bc, beta, backend)?,
            ))),
        })
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeConfig {
        self.next_with_ambient(rng).0
    }

    /// `(sample, ambient)`: for the loop model the ambient configuration is the
    /// random-cluster configuration the loops were drawn from.
    pub fn next_with_ambient<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (EdgeConfig, Option<EdgeConfig>) {
        match self {
            ConfigSampler::Bernoulli { m, q } => {
                let mut c = EdgeConfig::empty(*m);
                bernoulli_into(&mut c, *q, rng);
                (c, None)
            }
            ConfigSampler::Rc(s) => (s.next(rng), None),
            ConfigSampler::Loop(s) => {
                let (omega, eta) = s.next_pair(rng);
                (eta, Some(omega))
            }
            ConfigSampler::Current(s) => (s.next(rng), None),
            ConfigSampler::Double(pair) => {
                let a = pair.0.next(rng);
                let b = pair.1.next(rng);
                (a.union(&b), None)
            }
        }
    }
}

/// Ising sampler with an optional set of vertices pinned to `+`.
#[derive(Clone, Debug)]
pub enum IsingSampler {
    /// Cumulative table over all spin masks of the free vertices.
    Exact { free: Vec<usize>, n: usize, cumulative: Vec<f64> },
    /// Edwards–Sokal: random-cluster sample with the pinned set wired, then a
    /// uniform sign per cluster (the pinned cluster is `+`).
    Sw {
        rc: RcSampler,
        q: Quotient,
        pinned: Option<usize>,
    },
}

pub const ISING_VERTEX_CAP: usize = 20;

impl IsingSampler {
    pub fn new(g: &MultiGraph, beta: f64, plus: Option<&[usize]>, backend: Backend) -> Result<Self> {
        let params = ModelParams::from_beta(beta)?;
        let plus: Vec<usize> = plus.map(|p| p.to_vec()).unwrap_or_default();
        if plus.iter().any(|&v| v >= g.vertex_count()) {
            return Err(Error::InvalidArgument("pinned vertex out of range".into()));
        }
        match backend {
            Backend::Exact => {
                let free: Vec<usize> = (0..g.vertex_count()).filter(|v| !plus.contains(v)).collect();
                if free.len() > ISING_VERTEX_CAP {
                    return Err(Error::CapExceeded {
                        what: "free vertex count",
                        actual: free.len(),
                        limit: ISING_VERTEX_CAP,
                    });
                }
                let n = g.vertex_count();
                let logs: Vec<f64> = (0u64..1 << free.len())
                    .map(|m| log_weight_ising(g, &spread(n, &free, m), beta))
                    .collect();
                let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut acc = 0.0;
                let cumulative = logs
                    .iter()
                    .map(|l| {
                        acc += (l - max).exp();
                        acc
                    })
                    .collect();
                Ok(IsingSampler::Exact { free, n, cumulative })
            }
            sw => {
                let host = g.clone().with_boundary(plus.clone())?;
                let bc = BoundaryCondition::wired(&host);
                let q = quotient(&host, &bc)?;
                let pinned = plus.first().map(|&v| q.vertex_map[v]);
                Ok(IsingSampler::Sw {
                    rc: RcSampler::new(&host, Some(&bc), params.p, sw)?,
                    q,
                    pinned,
                })
            }
        }
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SpinConfig {
        match self {
            IsingSampler::Exact { free, n, cumulative } => {
                let u = rng.random::<f64>() * cumulative.last().unwrap();
                let m = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
                spread(*n, free, m as u64)
            }
            IsingSampler::Sw { rc, q, pinned } => {
                let omega = rc.next(rng);
                let qg = &q.graph;
                let mut uf = DisjointSet::new(qg.vertex_count());
                for e in omega.iter() {
                    let (a, b) = qg.edge(e);
                    uf.union(a, b);
                }
                let pinned_root = pinned.map(|v| uf.find(v));
                let mut sign = vec![false; qg.vertex_count()];
                for v in 0..qg.vertex_count() {
                    if uf.find(v) == v && Some(v) != pinned_root {
                        sign[v] = rng.random::<bool>();
                    }
                }
                let mut s = SpinConfig::all_plus(q.vertex_map.len());
                for (v, &w) in q.vertex_map.iter().enumerate() {
                    s.set(v, sign[uf.find(w)]);
                }
                s
            }
        }
    }
}

fn spread(n: usize, free: &[usize], mask: u64) -> SpinConfig {
    SpinConfig::from_indices(n, free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v))
}

pub fn sample_ising<R: Rng + ?Sized>(
    g: &MultiGraph,
    beta: f64,
    plus: Option<&[usize]>,
    rng: &mut R,
    backend: Backend,
) -> Result<SpinConfig> {
    Ok(IsingSampler::new(g, beta, plus, backend)?.next(rng))
}

pub use crate::planar::interfaces;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_box;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn single_edge() -> MultiGraph {
        MultiGraph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn conversion_examples() {
        let z = ModelParams::from_beta(0.0).unwrap();
        assert_eq!((z.p, z.x), (0.0, 0.0));
        let c = ModelParams::from_beta(0.5 * (1.0 + 2f64.sqrt()).ln()).unwrap();
        assert!((c.x - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((c.p - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        let one = ModelParams::from_x(1.0).unwrap();
        assert_eq!((one.p, one.beta), (1.0, f64::INFINITY));
        assert_eq!(ModelParams::from_beta(f64::INFINITY).unwrap().p, 1.0);
        assert!(ModelParams::from_p(1.5).is_err());
        assert!(ModelParams::from_beta(-1.0).is_err());
        assert!(ModelParams::from_x(f64::NAN).is_err());
    }

    #[test]
    fn dual_examples() {
        let s = 2.0 - 2f64.sqrt();
        assert!((dual_parameter(s).unwrap() - s).abs() < 1e-15);
        assert!((dual_parameter(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(dual_parameter(1.0 - 1e-12).unwrap() < 1e-11);
        assert!(dual_parameter(0.0).is_err() && dual_parameter(1.0).is_err());
        for p in [0.1, 0.5, 0.9] {
            let d = dual_parameter(p).unwrap();
            assert!((p * d / ((1.0 - p) * (1.0 - d)) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_examples() {
        let g = single_edge();
        let p = 0.3;
        let open = weight_rc(&g, &EdgeConfig::full(1), None, p).unwrap();
        let closed = weight_rc(&g, &EdgeConfig::empty(1), None, p).unwrap();
        assert!((open / closed - 2.0 * (p / (1.0 - p)) / 4.0).abs() < 1e-15);
        assert!((open / (open + closed) - p / (2.0 - p)).abs() < 1e-15);
        let grid = build_box(2, 1).unwrap();
        assert_eq!(weight_rc(&grid, &EdgeConfig::empty(12), None, 0.5).unwrap(), 512.0);
        assert!(weight_rc(&g, &EdgeConfig::empty(1), None, 1.1).is_err());
        let plus = SpinConfig::all_plus(9);
        assert!((weight_ising(&grid, &plus, 0.2) - (0.2f64 * 12.0).exp()).abs() < 1e-12);
        assert_eq!(weight_loop(&grid, &EdgeConfig::empty(12), None, 0.4).unwrap(), 1.0);
        let n = Current { mult: vec![2] };
        assert!((weight_current(&g, &n, 0.7) - 0.49 / 2.0).abs() < 1e-15);
        assert_eq!(weight_current(&g, &Current { mult: vec![1] }, 0.7), 0.0);
        assert_eq!(n.trace(), EdgeConfig::full(1));
    }

    #[test]
    fn bernoulli_examples() {
        let g = build_box(2, 1).unwrap();
        let mut rng = stream(0, 0);
        assert!(sample_bernoulli(&g, 0.0, &mut rng).unwrap().is_empty());
        assert_eq!(sample_bernoulli(&g, 1.0, &mut rng).unwrap().count(), 12);
        let n = 20_000;
        let mut hits = [0u32; 12];
        for _ in 0..n {
            for e in sample_bernoulli(&g, 0.5, &mut rng).unwrap().iter() {
                hits[e] += 1;
            }
        }
        let sd = (n as f64 * 0.25).sqrt();
        assert!(hits.iter().all(|&h| (h as f64 - n as f64 / 2.0).abs() < 4.0 * sd));
    }

    #[test]
    fn sw_examples() {
        let g = build_box(2, 1).unwrap();
        let mut rng = stream(1, 0);
        assert!(sample_rc_sw(&g, None, 0.0, 10, &mut rng).unwrap().is_empty());
        for bc in [BoundaryCondition::free(&g), BoundaryCondition::wired(&g)] {
            assert_eq!(sample_rc_sw(&g, Some(&bc), 1.0, 10, &mut rng).unwrap().count(), 12);
        }
        let e = single_edge();
        let p = 0.6;
        let mut sw = SwendsenWang::new(&e, None, p).unwrap();
        let n = 40_000;
        let open = (0..n).filter(|_| sw.run(1, &mut rng).contains(0)).count() as f64 / n as f64;
        let target = p / (2.0 - p);
        assert!((open - target).abs() < 4.0 * (target * (1.0 - target) / n as f64).sqrt() * 2.0);
    }

    #[test]
    fn exact_sampler_examples() {
        let e = single_edge();
        let s = RcExactSampler::new(&e, None, 2.0 / 3.0).unwrap();
        assert!((s.prob(1) - 0.5).abs() < 1e-15);
        let big = build_box(2, 2).unwrap();
        assert!(RcExactSampler::new(&big, None, 0.5).is_err());
        let g = build_box(2, 1).unwrap();
        let lo = RcExactSampler::new(&g, None, 0.4).unwrap();
        let hi = RcExactSampler::new(&g, None, 0.7).unwrap();
        let mut rng = stream(2, 0);
        for _ in 0..5_000 {
            let u: Vec<f64> = (0..12).map(|_| rng.random()).collect();
            assert!(lo.sample_with(&u).is_subset(&hi.sample_with(&u)));
        }
    }

    #[test]
    fn loop_examples() {
        let g = build_box(2, 1).unwrap();
        let mut rng = stream(3, 0);
        for backend in [Backend::Exact, Backend::default()] {
            assert!(sample_loop(&g, None, 0.0, &mut rng, backend).unwrap().is_empty());
            let s = sample_loop(&g, None, 1.0, &mut rng, backend).unwrap();
            assert!(source_map(&g, &s).is_empty());
        }
        assert!(sample_current(&g, 0.0, &mut rng, Backend::Exact).unwrap().is_empty());
        assert!(sample_double_current(&g, 0.0, &mut rng, Backend::Exact).unwrap().is_empty());
    }

    #[test]
    fn coupled_domination() {
        // loops ⊆ loops ∪ Bern(1 − 1/cosh β) ⊆ loops ∪ Bern(tanh β), with one
        // uniform per edge shared by both sprinklings
        let g = build_box(2, 1).unwrap();
        let params = ModelParams::from_beta(0.6).unwrap();
        let mut loops = LoopSampler::new(&g, None, params.x, Backend::Exact).unwrap();
        let mut rng = stream(4, 0);
        for _ in 0..2_000 {
            let eta = loops.next(&mut rng);
            let u: Vec<f64> = (0..12).map(|_| rng.random()).collect();
            let cur = EdgeConfig::from_indices(12, eta.iter().chain((0..12).filter(|&e| u[e] < params.current_density())));
            let rc = EdgeConfig::from_indices(12, eta.iter().chain((0..12).filter(|&e| u[e] < params.x)));
            assert!(eta.is_subset(&cur) && cur.is_subset(&rc));
        }
    }

    #[test]
    fn ising_samplers_agree_on_magnetisation_sign() {
        let g = build_box(2, 1).unwrap();
        let mut rng = stream(5, 0);
        let mut ex = IsingSampler::new(&g, 0.3, Some(&[0]), Backend::Exact).unwrap();
        let mut sw = IsingSampler::new(&g, 0.3, Some(&[0]), Backend::default()).unwrap();
        let n = 20_000;
        let mean = |s: &mut IsingSampler, rng: &mut crate::rng::StreamRng| {
            (0..n).map(|_| s.next(rng).spin(8) as f64).sum::<f64>() / n as f64
        };
        let (a, b) = (mean(&mut ex, &mut rng), mean(&mut sw, &mut rng));
        assert!((a - b).abs() < 0.05, "{a} vs {b}");
        assert!((0..100).all(|_| ex.next(&mut rng).spin(0) == 1 && sw.next(&mut rng).spin(0) == 1));
    }

    proptest! {
        #[test]
        fn conversions_round_trip(v in 0.0f64..0.99) {
            for m in [ModelParams::from_p(v).unwrap(), ModelParams::from_x(v).unwrap(), ModelParams::from_beta(3.0 * v).unwrap()] {
                for back in [ModelParams::from_beta(m.beta).unwrap(), ModelParams::from_p(m.p).unwrap(), ModelParams::from_x(m.x).unwrap()] {
                    for (a, b) in [(m.beta, back.beta), (m.p, back.p), (m.x, back.x)] {
                        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300) + 1e-300 || a == b, "{a} vs {b}");
                    }
                }
            }
        }

        #[test]
        fn dual_is_involution(p in 1e-6f64..(1.0 - 1e-6)) {
            let back = dual_parameter(dual_parameter(p).unwrap()).unwrap();
            prop_assert!((back - p).abs() <= 1e-14);
        }

        #[test]
        fn positive_loop_weight_means_even(c in 0u64..(1 << 12)) {
            let g = build_box(2, 1).unwrap();
            let cfg = EdgeConfig::from_mask(12, c);
            for bc in [BoundaryCondition::free(&g), BoundaryCondition::wired(&g)] {
                if weight_loop(&g, &cfg, Some(&bc), 0.5).unwrap() > 0.0 {
                    prop_assert!(crate::evens::is_even(&g, &cfg, Some(&bc)).unwrap());
                }
            }
        }

        #[test]
        fn monotone_coupling_nests(seed in any::<u64>(), p1 in 0.05f64..0.95, dp in 0.0f64..0.5) {
            let g = MultiGraph::cycle(5).unwrap();
            let p2 = (p1 + dp).min(1.0);
            let lo = RcExactSampler::new(&g, None, p1).unwrap();
            let hi = RcExactSampler::new(&g, None, p2).unwrap();
            let mut rng = stream(seed, 0);
            let u: Vec<f64> = (0..5).map(|_| rng.random()).collect();
            prop_assert!(lo.sample_with(&u).is_subset(&hi.sample_with(&u)));
        }
    }
}
