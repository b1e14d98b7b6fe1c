use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dilation_bench::uniform_instance;
use dilation_core::{greedy_augment, optimal_augment, GreedyOptions, DEFAULT_ENUMERATION_CAP};

fn bench_greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_k3");
    group.sample_size(20);
    for n in [40usize, 80] {
        let parsed = uniform_instance(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &parsed, |b, parsed| {
            b.iter(|| greedy_augment(black_box(&parsed.graph), 3, GreedyOptions::default()));
        });
    }
    group.finish();
}

fn bench_optimal(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_k2");
    group.sample_size(20);
    for n in [10usize, 14] {
        let parsed = uniform_instance(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &parsed, |b, parsed| {
            b.iter(|| {
                optimal_augment(black_box(&parsed.graph), 2, DEFAULT_ENUMERATION_CAP).unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_greedy, bench_optimal);
criterion_main!(benches);
