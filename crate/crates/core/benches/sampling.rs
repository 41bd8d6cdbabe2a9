use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use treegraft::batch::{map_indexed, map_indexed_sequential};
use treegraft::{MeteredBitSource, Sampler, UnaryWeight, WeightedSampler};

const SEED: u64 = 0x5eed;

fn batches(c: &mut Criterion) {
    let configs = [
        ("binary-efficient", Sampler::BinaryEfficient, 1000),
        ("binary-remy-classic", Sampler::BinaryRemyClassic, 1000),
        ("motzkin", Sampler::Motzkin, 1000),
        (
            "weighted-u2",
            Sampler::Weighted(WeightedSampler::new(UnaryWeight::new(2, 0).unwrap()).unwrap()),
            16,
        ),
    ];
    let count = 256u64;
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    group.throughput(Throughput::Elements(count));
    for (name, sampler, size) in &configs {
        let one = |i: u64| {
            let mut src = MeteredBitSource::for_sample(SEED, i);
            sampler.sample(*size, &mut src).unwrap().1.bits_consumed
        };
        group.bench_with_input(BenchmarkId::new("parallel", name), &count, |b, &k| {
            b.iter(|| black_box(map_indexed(k, one)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", name), &count, |b, &k| {
            b.iter(|| black_box(map_indexed_sequential(k, one)))
        });
    }
    group.finish();
}

fn single_large(c: &mut Criterion) {
    let mut group = c.benchmark_group("single");
    group.sample_size(10);
    for n in [10_000usize, 100_000, 1_000_000] {
        group.throughput(Throughput::Elements(2 * n as u64 + 1));
        group.bench_with_input(BenchmarkId::new("binary-efficient", n), &n, |b, &n| {
            b.iter(|| {
                let mut src = MeteredBitSource::new(SEED);
                black_box(
                    Sampler::BinaryEfficient
                        .sample(n, &mut src)
                        .unwrap()
                        .0
                        .size(),
                )
            })
        });
    }
    group.finish();
}

criterion_group!(benches, batches, single_large);
criterion_main!(benches);
