//! Cross-module invariants of the spectral pipeline on randomized and
//! structured instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vandal_core::torus_nodes::{gen_equispaced, gen_quasi_grid, gen_random_separated, NodeSet};
use vandal_core::vandermonde::{spectrum, spectrum_explicit, spectrum_with, SpectrumOptions};
use vandal_core::VandermondeSpec;

/// Random well-separated instances across d = 1..3 with modest sizes.
fn random_instances(count: usize, seed: u64) -> Vec<VandermondeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(1..=3usize);
        let m = rng.gen_range(2..=6usize);
        let n = rng.gen_range(2..=12usize);
        // keep the matrix wide (M <= N^d) so the Gram spectrum determines
        // all M singular values
        if n.pow(d as u32) < m {
            continue;
        }
        let q_target = match d {
            1 => rng.gen_range(0.02..0.15),
            2 => rng.gen_range(0.05..0.2),
            _ => rng.gen_range(0.1..0.25),
        };
        let node_seed = rng.gen::<u64>();
        let Ok(ns) = gen_random_separated(m, d, q_target, node_seed) else {
            continue;
        };
        out.push(VandermondeSpec::new(ns, n).unwrap());
    }
    out
}

#[test]
fn sigma_min_and_max_sandwich_n_to_d_half() {
    for spec in random_instances(60, 11) {
        let s = spectrum(&spec).unwrap();
        let nd2 = (spec.degree() as f64).powf(spec.node_set().dim() as f64 / 2.0);
        assert!(
            s.sigma_min <= nd2 * (1.0 + 1e-10),
            "sigma_min {} > {}",
            s.sigma_min,
            nd2
        );
        assert!(
            s.sigma_max >= nd2 * (1.0 - 1e-10),
            "sigma_max {} < {}",
            s.sigma_max,
            nd2
        );
    }
}

#[test]
fn separated_bounds_hold_on_random_instances() {
    for spec in random_instances(60, 23) {
        let q = spec.node_set().separation().unwrap();
        let n = spec.degree() as f64;
        let d = spec.node_set().dim() as f64;
        if q * n <= 1.0 {
            continue;
        }
        let s = spectrum(&spec).unwrap();
        let upper = (n + 1.0 / q).powf(d / 2.0);
        assert!(s.sigma_max <= upper * (1.0 + 1e-10));
        if spec.node_set().dim() == 1 {
            let lower = (n - 1.0 / q).sqrt();
            assert!(
                s.sigma_min >= lower * (1.0 - 1e-10),
                "sigma_min {} < {}",
                s.sigma_min,
                lower
            );
        }
    }
}

#[test]
fn gram_and_explicit_paths_agree() {
    for spec in random_instances(40, 37) {
        let gram = spectrum(&spec).unwrap();
        let explicit = spectrum_explicit(&spec, 10_000_000).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        assert!(
            rel(gram.sigma_max, explicit.sigma_max) <= 1e-8,
            "sigma_max mismatch: {} vs {}",
            gram.sigma_max,
            explicit.sigma_max
        );
        assert!(
            rel(gram.sigma_min, explicit.sigma_min) <= 1e-8,
            "sigma_min mismatch: {} vs {}",
            gram.sigma_min,
            explicit.sigma_min
        );
    }
}

#[test]
fn cross_check_residual_is_small() {
    let opts = SpectrumOptions {
        cross_check: true,
        ..SpectrumOptions::default()
    };
    for spec in random_instances(10, 41) {
        let s = spectrum_with(&spec, &opts).unwrap();
        assert!(s.residual <= 1e-8, "residual {}", s.residual);
    }
}

#[test]
fn quasi_grid_condition_number_is_one() {
    for (n, d, seed) in [(4usize, 2usize, 0u64), (3, 2, 7), (3, 3, 1), (5, 2, 9)] {
        let ns = gen_quasi_grid(n, d, seed).unwrap();
        let spec = VandermondeSpec::new(ns, n).unwrap();
        let s = spectrum(&spec).unwrap();
        assert!(
            (s.cond - 1.0).abs() <= 1e-10,
            "n={n} d={d}: cond = {}",
            s.cond
        );
    }
}

#[test]
fn exact_grid_condition_number_is_one() {
    // N a multiple of M: Nq integer, both extremes collapse to N^{d/2}
    for (m, d, n) in [(3usize, 1usize, 6usize), (4, 2, 8), (2, 3, 4)] {
        let ns = gen_equispaced(m, d).unwrap();
        let spec = VandermondeSpec::new(ns, n).unwrap();
        let s = spectrum(&spec).unwrap();
        assert!((s.cond - 1.0).abs() <= 1e-10, "m={m} d={d} n={n}: {}", s.cond);
    }
}

#[test]
fn condition_number_monotone_under_refinement() {
    // fixed separated node set, N doubling: cond is non-increasing up to
    // rounding noise and approaches 1 once N·q is large
    let ns = gen_random_separated(5, 1, 0.1, 314).unwrap();
    let q = ns.separation().unwrap();
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    for k in 1..=14u32 {
        let n = 2usize.pow(k);
        let spec = VandermondeSpec::new(ns.clone(), n).unwrap();
        let s = spectrum(&spec).unwrap();
        if s.cond.is_finite() {
            assert!(
                s.cond <= prev * (1.0 + 1e-9),
                "N={n}: cond {} rose above {}",
                s.cond,
                prev
            );
            prev = s.cond;
            last = s.cond;
        }
    }
    assert!(16384.0 * q >= 1e3);
    assert!(last < 1.05, "cond at N=16384 is {last}");
}

#[test]
fn sigma_min_degenerates_with_collapsing_separation() {
    // two nodes at wrap-distance 2^{-k}: sigma_min strictly decreases once
    // the gap is below 1/N (larger gaps can make the rows exactly
    // orthogonal whenever N·gap is an integer)
    let n = 8usize;
    let mut prev = f64::INFINITY;
    for k in 4..=12u32 {
        let gap = 2f64.powi(-(k as i32));
        let ns = NodeSet::new(1, vec![vec![0.1], vec![0.1 + gap]]).unwrap();
        let spec = VandermondeSpec::new(ns, n).unwrap();
        let s = spectrum(&spec).unwrap();
        assert!(
            s.sigma_min < prev,
            "gap 2^-{k}: sigma_min {} did not decrease below {}",
            s.sigma_min,
            prev
        );
        prev = s.sigma_min;
    }
    assert!(prev < 1e-2);
}
