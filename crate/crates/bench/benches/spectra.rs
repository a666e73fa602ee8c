//! Benchmarks for the hot paths: Gram assembly, the Gram-path spectrum,
//! the explicit-path spectrum, and localizer evaluation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vandal_core::localizer::{h_rule_of_p, psi_hat, Psi, PsiParams};
use vandal_core::torus_nodes::gen_random_separated;
use vandal_core::vandermonde::{gram_matrix, spectrum, spectrum_explicit};
use vandal_core::VandermondeSpec;

fn spec_for(m: usize, d: usize, n: usize) -> VandermondeSpec {
    // stay under the dart-throwing density cap m·q^d <= 1/2
    let q = (0.4 / m as f64).powf(1.0 / d as f64);
    let ns = gen_random_separated(m, d, q, 7).unwrap();
    VandermondeSpec::new(ns, n).unwrap()
}

fn bench_gram_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram_assembly");
    for (m, d, n) in [(16usize, 1usize, 1024usize), (32, 2, 64), (64, 2, 64), (32, 3, 16)] {
        let spec = spec_for(m, d, n);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("m{m}_d{d}_n{n}")),
            &spec,
            |bencher, s| bencher.iter(|| gram_matrix(s)),
        );
    }
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_gram_path");
    for (m, d, n) in [(16usize, 1usize, 1024usize), (64, 2, 64), (128, 2, 64)] {
        let spec = spec_for(m, d, n);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("m{m}_d{d}_n{n}")),
            &spec,
            |bencher, s| bencher.iter(|| spectrum(s).unwrap()),
        );
    }
    group.finish();

    let mut group = c.benchmark_group("spectrum_explicit_path");
    for (m, d, n) in [(16usize, 1usize, 256usize), (16, 2, 16)] {
        let spec = spec_for(m, d, n);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("m{m}_d{d}_n{n}")),
            &spec,
            |bencher, s| bencher.iter(|| spectrum_explicit(s, 10_000_000).unwrap()),
        );
    }
    group.finish();
}

fn bench_localizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("localizer");
    for (d, r) in [(1usize, 1usize), (2, 2), (3, 3)] {
        let b = 8.0;
        let params = PsiParams::new(d, r, b, h_rule_of_p(d, r, b).min(0.45)).unwrap();
        let psi = Psi::new(params);
        let x = vec![0.01; d];
        group.bench_with_input(
            BenchmarkId::new("psi_eval", format!("d{d}_r{r}")),
            &x,
            |bencher, point| bencher.iter(|| psi.eval(point).unwrap()),
        );
        let v = vec![1.7; d];
        group.bench_with_input(
            BenchmarkId::new("psi_hat", format!("d{d}_r{r}")),
            &v,
            |bencher, point| bencher.iter(|| psi_hat(point, &params).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_gram_assembly, bench_spectrum, bench_localizer);
criterion_main!(benches);
