use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dilation_bench::uniform_instance;
use dilation_core::{apsp, augment_distances};

fn bench_apsp(c: &mut Criterion) {
    let mut group = c.benchmark_group("apsp");
    for n in [50usize, 100, 150] {
        let parsed = uniform_instance(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &parsed, |b, parsed| {
            b.iter(|| apsp(black_box(&parsed.graph)));
        });
    }
    group.finish();
}

fn bench_incremental_update(c: &mut Criterion) {
    let mut group = c.benchmark_group("incremental_update");
    for n in [50usize, 100, 150] {
        let parsed = uniform_instance(n, 7);
        let oracle = apsp(&parsed.graph);
        let (u, v) = parsed.graph.non_edges()[0];
        let w = parsed.space.distance(u, v);
        group.bench_with_input(BenchmarkId::from_parameter(n), &oracle, |b, oracle| {
            b.iter(|| {
                augment_distances(black_box(parsed.space.as_ref()), oracle, u, v, w).unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_apsp, bench_incremental_update);
criterion_main!(benches);
