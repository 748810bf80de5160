use graphrep::bits::EdgeConfig;
use graphrep::evens::sample_ueg;
use graphrep::lattice::{build_torus, hyperplane};
use graphrep::models::sample_bernoulli;
use graphrep::rng::stream;
use graphrep::topology::{classify_components, crossing_parity, enumerate_simple_cycles, is_simple_cycle, xor_action};
use proptest::prelude::*;

/// Non-triviality by the definition: some simple cycle inside the component
/// crosses the hyperplane an odd number of times.
fn has_odd_simple_cycle(cycles: &[u64], odd: &[bool], comp_edges: u64) -> bool {
    cycles.iter().zip(odd).any(|(&c, &o)| o && c & comp_edges == c)
}

fn check_against_loops(n: usize, configs: impl Iterator<Item = EdgeConfig>) {
    let g = build_torus(2, n).unwrap();
    let m = g.edge_count();
    let h = hyperplane(&g, 0).unwrap();
    let cycles = enumerate_simple_cycles(&g, usize::MAX).unwrap();
    let odd: Vec<bool> = cycles
        .iter()
        .map(|&c| crossing_parity(&g, &EdgeConfig::from_mask(m, c), &h).unwrap())
        .collect();
    for c in configs {
        let r = classify_components(&g, &c, &h).unwrap();
        for comp in &r.components {
            let mask = c
                .iter()
                .filter(|&e| comp.vertices.binary_search(&g.edge(e).0).is_ok())
                .fold(0u64, |m, e| m | 1 << e);
            assert_eq!(comp.nontrivial, has_odd_simple_cycle(&cycles, &odd, mask));
        }
    }
}

#[test]
fn span_criterion_matches_loop_search_on_every_config_of_t1() {
    check_against_loops(1, (0u64..256).map(|k| EdgeConfig::from_mask(8, k)));
}

#[test]
fn span_criterion_matches_loop_search_on_t2_samples() {
    let g = build_torus(2, 2).unwrap();
    let mut rng = stream(21, 0);
    let configs: Vec<EdgeConfig> = (0..400).map(|i| sample_bernoulli(&g, 0.3 + 0.4 * (i % 5) as f64 / 4.0, &mut rng).unwrap()).collect();
    check_against_loops(2, configs.into_iter());
}

#[test]
fn uniform_even_subgraphs_are_often_nontrivial() {
    // P[NT] ≥ 1/2 under the uniform even subgraph of the full torus
    let g = build_torus(2, 4).unwrap();
    let h = hyperplane(&g, 0).unwrap();
    let full = EdgeConfig::full(g.edge_count());
    let mut rng = stream(22, 0);
    let n = 4000;
    let nt = (0..n)
        .filter(|_| classify_components(&g, &sample_ueg(&g, &full, &mut rng), &h).unwrap().is_nontrivial())
        .count();
    let p = nt as f64 / n as f64;
    assert!(p >= 0.5 - 4.0 * (0.25 / n as f64).sqrt(), "{p}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity_is_linear(a in any::<u32>(), b in any::<u32>(), level in 0i64..4) {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, level).unwrap();
        let (x, y) = (EdgeConfig::from_mask(32, a as u64), EdgeConfig::from_mask(32, b as u64));
        let px = crossing_parity(&g, &x, &h).unwrap();
        let py = crossing_parity(&g, &y, &h).unwrap();
        prop_assert_eq!(crossing_parity(&g, &x.xor(&y), &h).unwrap(), px ^ py);
    }

    #[test]
    fn xor_with_a_wraparound_rescues_trivial_evens(seed in any::<u64>()) {
        let g = build_torus(2, 2).unwrap();
        let h = hyperplane(&g, 0).unwrap();
        let mut rng = stream(seed, 0);
        let eta = sample_ueg(&g, &EdgeConfig::full(32), &mut rng);
        let row = EdgeConfig::from_indices(32, (0..32).filter(|&e| g.label(e) == Some(0) && g.coords(g.edge(e).0).unwrap()[1] == 1));
        prop_assert!(is_simple_cycle(&g, &row));
        let out = xor_action(&g, &eta, &row, &h).unwrap();
        let before = classify_components(&g, &eta, &h).unwrap().is_nontrivial();
        let after = classify_components(&g, &out, &h).unwrap().is_nontrivial();
        prop_assert!(before || after);
    }
}
