use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use vplane_core::{CodecMap, NumberSystem, WeightKind};

fn build_maps(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_map");
    for (kind, k) in [
        (WeightKind::FibonacciP(1), 8),
        (WeightKind::Prime, 8),
        (WeightKind::Natural, 8),
        (WeightKind::Natural, 12),
        (WeightKind::Prime, 16),
    ] {
        let system = NumberSystem::new(kind, k).unwrap();
        group.bench_with_input(BenchmarkId::new(kind.label(), k), &system, |b, s| {
            b.iter(|| CodecMap::build(black_box(s)))
        });
    }
    group.finish();
}

fn decompose_compose(c: &mut Criterion) {
    let system = NumberSystem::new(WeightKind::Natural, 8).unwrap();
    let map = CodecMap::build(&system);
    c.bench_function("natural_round_trip_all_values", |b| {
        b.iter(|| {
            (0..=255u64)
                .map(|v| {
                    system
                        .compose(map.decompose(black_box(v)).unwrap())
                        .unwrap()
                })
                .sum::<u64>()
        })
    });
}

criterion_group!(benches, build_maps, decompose_compose);
criterion_main!(benches);
