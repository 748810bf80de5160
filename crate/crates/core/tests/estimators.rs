use graphrep::bits::EdgeConfig;
use graphrep::estimators::{clusters, estimate_all, radius, Observable, RunShape, SamplerSpec};
use graphrep::lattice::{build_box, build_torus, hyperplane, linf_distance};
use graphrep::models::{Backend, Model};
use graphrep::oracle::enumerate_loop;
use graphrep::topology::classify_components;
use graphrep::MultiGraph;

fn oracle_value(g: &MultiGraph, x: f64, o: &Observable) -> f64 {
    let law = enumerate_loop(g, None, x).unwrap();
    let h = g.is_torus().then(|| hyperplane(g, 0).unwrap());
    law.expectation(|k| {
        let c = EdgeConfig::from_mask(g.edge_count(), k);
        let cl = clusters(g, &c);
        match *o {
            Observable::PConnect { v, w } => cl.connected(v, w) as u8 as f64,
            Observable::PReachBoundary { v, k } => {
                (cl.members(v).into_iter().filter_map(|u| linf_distance(g, v, u)).max().unwrap() >= k) as u8 as f64
            }
            Observable::MeanClusterSize { v } => cl.size_of(v) as f64,
            Observable::MeanRadius { v } => radius(g, &cl, v).unwrap() as f64,
            Observable::PInCnt => {
                classify_components(g, &c, h.as_ref().unwrap()).unwrap().cnt_size() as f64 / g.vertex_count() as f64
            }
            Observable::CntDensity => {
                classify_components(g, &c, h.as_ref().unwrap()).unwrap().cnt_edges.count() as f64 / g.edge_count() as f64
            }
            Observable::EdgeOpen { e } => c.contains(e) as u8 as f64,
            Observable::WraparoundLb => unreachable!(),
        }
    })
}

fn calibrate(g: &MultiGraph, x: f64, obs: &[Observable]) {
    let truth: Vec<f64> = obs.iter().map(|o| oracle_value(g, x, o)).collect();
    let spec = SamplerSpec::new(g, None, Model::Loop { x }, Backend::Exact);
    let mut hits = vec![0; obs.len()];
    for seed in 0..100 {
        let est = estimate_all(&spec, obs, RunShape::new(640, seed)).unwrap();
        for (i, e) in est.iter().enumerate() {
            if (e.estimate - truth[i]).abs() <= 4.0 * e.stderr {
                hits[i] += 1;
            }
        }
    }
    for (o, h) in obs.iter().zip(&hits) {
        assert!(*h >= 95, "{}: {h}/100 seeds within 4 stderr", o.label());
    }
}

#[test]
fn box_estimators_match_the_oracle() {
    let g = build_box(2, 1).unwrap();
    let centre = g.find_vertex(&[0, 0]).unwrap();
    let corner = g.find_vertex(&[-1, -1]).unwrap();
    calibrate(
        &g,
        0.7,
        &[
            Observable::PConnect { v: corner, w: centre },
            Observable::PReachBoundary { v: centre, k: 1 },
            Observable::MeanClusterSize { v: centre },
            Observable::MeanRadius { v: centre },
            Observable::EdgeOpen { e: 0 },
        ],
    );
}

#[test]
fn torus_estimators_match_the_oracle() {
    let g = build_torus(2, 1).unwrap();
    calibrate(&g, 0.7, &[Observable::PInCnt, Observable::CntDensity, Observable::MeanClusterSize { v: 0 }]);
}

#[test]
fn cluster_size_grows_with_the_box() {
    let mut last: Option<(f64, f64)> = None;
    for n in [2usize, 4, 8] {
        let g = build_box(2, n).unwrap();
        let o = g.find_vertex(&[0, 0]).unwrap();
        let spec = SamplerSpec::new(&g, None, Model::Loop { x: 0.9 }, Backend::default());
        let e = &estimate_all(&spec, &[Observable::MeanClusterSize { v: o }], RunShape::new(3200, n as u64)).unwrap()[0];
        if let Some((m, s)) = last {
            assert!(e.estimate >= m - 4.0 * (s * s + e.stderr * e.stderr).sqrt(), "n={n}: {} after {m}", e.estimate);
        }
        last = Some((e.estimate, e.stderr));
    }
}
