use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mowsp_bench::{lambdas, waxman};
use mowsp_core::harness::Regime;
use mowsp_core::{solve_idaq, solve_standard};

fn standard_vs_idaq(c: &mut Criterion) {
    let g = waxman(3);
    for regime in [Regime::Uncorrelated, Regime::Correlated] {
        let mut group = c.benchmark_group(format!("waxman/{regime}"));
        group.sample_size(20);
        for k in [5usize, 15, 25, 35, 50] {
            let l = lambdas(regime, k, 5, 17);
            group.bench_with_input(BenchmarkId::new("standard", k), &l, |b, l| {
                b.iter(|| solve_standard(black_box(&g), 0, l).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("idaq", k), &l, |b, l| {
                b.iter(|| solve_idaq(black_box(&g), 0, l).unwrap())
            });
        }
        group.finish();
    }
}

criterion_group!(benches, standard_vs_idaq);
criterion_main!(benches);
