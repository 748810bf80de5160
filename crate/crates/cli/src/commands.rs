//! The four subcommands. Each returns whether its checks passed; errors
//! propagate to the caller as usage or cap failures.

use std::io::Write;

use anyhow::{bail, Result};
use graphrep::bits::EdgeConfig;
use graphrep::dist::tv_distance;
use graphrep::estimators::{estimate_all, mixing_gap, EstimateRow, Event, Observable, SamplerSpec};
use graphrep::evens::{marginal_ueg_exact, Ambient};
use graphrep::lattice::{build_box, GraphKind};
use graphrep::models::{interface_beta, Backend, ConfigSampler, Model};
use graphrep::oracle::{current_law, current_truncated, enumerate_loop, identity_suite, interface_law, IdentityReport};
use graphrep::planar::dual_graph;
use graphrep::rng::stream;
use graphrep::topology::{count_disjoint_wraparounds, classify_components};
use graphrep::{BoundaryCondition, Hyperplane, MultiGraph};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;

/// Where results go, with the config hash written first.
pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(cfg: &ExperimentConfig) -> Result<Self> {
        let out: Box<dyn Write> = match &cfg.output {
            Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Self { out })
    }

    fn csv(self, hash: &str) -> Result<csv::Writer<Box<dyn Write>>> {
        let mut out = self.out;
        writeln!(out, "# config_sha256={hash}")?;
        Ok(csv::Writer::from_writer(out))
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct CheckReport<'a> {
    config_sha256: &'a str,
    host: &'a str,
    edges: usize,
    pass: bool,
    identities: &'a [IdentityReport],
}

/// Exact identity suite on one host.
pub fn enumerate_check(cfg: &ExperimentConfig, hash: &str) -> Result<bool> {
    let g = cfg.host.build()?;
    let params = cfg.model.params()?;
    let host = cfg.host.name();
    let mut reports = identity_suite(&g, host, params.p)?;
    if params.beta.is_finite() {
        let tr = current_truncated(&g, params.beta, 40)?;
        let built = current_law(&g, None, params.beta)?;
        reports.push(IdentityReport::new(
            "truncated current = loop ∪ bern(1 − 1/cosh β)",
            host,
            format!("beta={} cap=40", params.beta),
            tv_distance(&tr.law, &built)?,
            tr.tail_bound + 1e-12,
        ));
    }
    if let GraphKind::Box { d, n } = *g.kind() {
        if n >= 2 {
            let inner = build_box(d, n - 1)?;
            let sub = g.embed_edges(&inner)?;
            let marginal = marginal_ueg_exact(&g, &sub, Ambient::Full)?;
            let all: Vec<usize> = (0..inner.edge_count()).collect();
            let wired = marginal_ueg_exact(&inner, &all, Ambient::Boundary(&BoundaryCondition::wired(&inner)))?;
            reports.push(IdentityReport::new(
                "ueg marginal on the inner box = wired ueg",
                host,
                format!("inner n={}", n - 1),
                tv_distance(&marginal, &wired)?,
                1e-12,
            ));
        }
    }
    let planar = matches!(g.kind(), GraphKind::HexPatch { .. } | GraphKind::Box { d: 2, .. });
    if planar {
        let dual = dual_graph(&g)?;
        let iface = interface_law(&dual, interface_beta(params.x)?)?;
        let loops = enumerate_loop(&g, None, params.x)?;
        reports.push(IdentityReport::new(
            "plus-boundary interfaces = loop",
            host,
            format!("x={}", params.x),
            tv_distance(&iface, &loops)?,
            1e-12,
        ));
    }
    let pass = reports.iter().all(|r| r.pass);
    let report = CheckReport {
        config_sha256: hash,
        host,
        edges: g.edge_count(),
        pass,
        identities: &reports,
    };
    let mut out = Sink::open(cfg)?.out;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(pass)
}

/// `n·estimate` of the torus observables across sizes.
pub fn torus_scan(cfg: &ExperimentConfig, hash: &str) -> Result<bool> {
    let model = cfg.model.model()?;
    let mut w = Sink::open(cfg)?.csv(hash)?;
    let mut header: Vec<&str> = EstimateRow::HEADER.to_vec();
    header.push("n_times_estimate");
    w.write_record(&header)?;
    for &n in &cfg.n_values {
        let host = cfg.host.with_n(n)?;
        let g = host.build()?;
        if !g.is_torus() {
            bail!("torus-scan needs a torus host");
        }
        let observables = if cfg.observables.is_empty() {
            vec![
                Observable::PInCnt,
                Observable::PReachBoundary { v: 0, k: n as i64 },
                Observable::WraparoundLb,
            ]
        } else {
            cfg.observables.clone()
        };
        let bc = cfg.bc.build(&g);
        let spec = SamplerSpec::new(&g, bc.as_ref(), model, cfg.backend);
        let (d, _) = host.dims();
        for e in estimate_all(&spec, &observables, cfg.shape())? {
            let row = EstimateRow::new(&e, host.name(), d, n, &model, cfg.bc.name());
            write_row(&mut w, &row, &[(n as f64 * e.estimate).to_string()])?;
        }
    }
    w.flush()?;
    Ok(true)
}

fn write_row<W: Write>(w: &mut csv::Writer<W>, r: &EstimateRow, extra: &[String]) -> Result<()> {
    let mut rec = vec![
        r.observable.clone(),
        r.host.clone(),
        r.d.to_string(),
        r.n.to_string(),
        r.model.clone(),
        fmt_opt(r.beta),
        fmt_opt(r.p),
        fmt_opt(r.x),
        r.bc.clone(),
        r.estimate.to_string(),
        r.stderr.to_string(),
        r.n_samples.to_string(),
        r.seed.to_string(),
    ];
    rec.extend_from_slice(extra);
    w.write_record(&rec)?;
    Ok(())
}

/// Exact gap of an event between the free and wired uniform even subgraph.
fn exact_ueg_gap(g: &MultiGraph, event: &Event, map: &[usize]) -> Result<f64> {
    let wired = BoundaryCondition::wired(g);
    let p = |ambient| -> Result<f64> {
        let law = marginal_ueg_exact(g, map, ambient)?;
        let ident: Vec<usize> = (0..map.len()).collect();
        Ok(law.prob_of(|k| event.holds(&EdgeConfig::from_mask(map.len(), k), &ident)))
    };
    Ok((p(Ambient::Full)? - p(Ambient::Boundary(&wired))?).abs())
}

/// Free versus wired probability of a window event across box sizes.
pub fn mixing_scan(cfg: &ExperimentConfig, hash: &str) -> Result<bool> {
    let model = cfg.model.model()?;
    let (d, _) = cfg.host.dims();
    let k = cfg.window_n.unwrap_or(1);
    let window = build_box(d, k)?;
    let event = match &cfg.event {
        Some(e) => e.clone(),
        None => {
            let o = window.find_vertex(&vec![0; d]).unwrap();
            let mut e1 = vec![0; d];
            e1[0] = 1;
            Event::edge_open(window.find_edge(o, window.find_vertex(&e1).unwrap()).unwrap())
        }
    };
    let mut w = Sink::open(cfg)?.csv(hash)?;
    w.write_record([
        "host", "d", "n", "window_n", "model", "beta", "p", "x", "p_free", "stderr_free", "p_wired", "stderr_wired",
        "gap", "stderr", "exact_gap", "n_samples", "seed",
    ])?;
    let params = model.params();
    for &n in &cfg.n_values {
        if n < k {
            bail!("n = {n} is smaller than the window");
        }
        let host = cfg.host.with_n(n)?;
        let g = host.build()?;
        let wired = BoundaryCondition::wired(&g);
        let a = SamplerSpec::new(&g, None, model, cfg.backend);
        let b = SamplerSpec::new(&g, Some(&wired), model, cfg.backend);
        let gap = mixing_gap(&window, &event, &a, &b, cfg.shape())?;
        let exact = match model {
            Model::Loop { x } if x == 1.0 => Some(exact_ueg_gap(&g, &event, &g.embed_edges(&window)?)?),
            _ => None,
        };
        w.write_record([
            host.name().to_string(),
            d.to_string(),
            n.to_string(),
            k.to_string(),
            model.name().to_string(),
            fmt_opt(params.map(|m| m.beta)),
            fmt_opt(params.map(|m| m.p)),
            fmt_opt(params.map(|m| m.x)),
            gap.p_a.to_string(),
            gap.stderr_a.to_string(),
            gap.p_b.to_string(),
            gap.stderr_b.to_string(),
            gap.gap.to_string(),
            gap.stderr.to_string(),
            fmt_opt(exact),
            gap.n_samples.to_string(),
            cfg.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(true)
}

/// Raw samples as hex edge masks, with winding columns on tori.
pub fn sample(cfg: &ExperimentConfig, hash: &str) -> Result<bool> {
    let g = cfg.host.build()?;
    let model = cfg.model.model()?;
    let bc = cfg.bc.build(&g);
    let n = cfg.samples.unwrap_or(0);
    let mut sampler = ConfigSampler::new(&g, bc.as_ref(), model, cfg.backend)?;
    let iid = matches!(cfg.backend, Backend::Exact) || matches!(model, Model::Bernoulli { .. });
    let configs: Vec<EdgeConfig> = if iid {
        (0..n)
            .into_par_iter()
            .map(|i| sampler.clone().next(&mut stream(cfg.seed, i as u64)))
            .collect()
    } else {
        let mut rng = stream(cfg.seed, 0);
        (0..n).map(|_| sampler.next(&mut rng)).collect()
    };
    let plane: Option<Hyperplane> = if g.is_torus() {
        Some(graphrep::lattice::hyperplane(&g, 0)?)
    } else {
        None
    };
    let winding: Vec<[String; 4]> = configs
        .par_iter()
        .map(|c| match &plane {
            Some(h) => {
                let r = classify_components(&g, c, h).expect("torus host");
                let lb = count_disjoint_wraparounds(&g, c, h).expect("torus host");
                [r.n_components(), r.n_nontrivial(), r.cnt_size(), lb].map(|v| v.to_string())
            }
            None => Default::default(),
        })
        .collect();
    let mut w = Sink::open(cfg)?.csv(hash)?;
    w.write_record(["sample_id", "config", "n_components", "n_nontrivial", "cnt_size", "wraparound_lb"])?;
    for (i, (c, wr)) in configs.iter().zip(&winding).enumerate() {
        let mut rec = vec![i.to_string(), c.to_hex()];
        rec.extend(wr.iter().cloned());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(true)
}
