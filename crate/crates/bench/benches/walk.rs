use coxwalk::ncore::random_core;
use coxwalk::walker::{simulate, Variant};
use coxwalk_bench::{root_system, SEED};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn walk(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    let steps = 10_000;
    group.throughput(Throughput::Elements(steps as u64));
    for tag in ["A2", "G2", "A4", "E6"] {
        let rs = root_system(tag);
        group.bench_function(BenchmarkId::new("free", tag), |b| b.iter(|| simulate(&rs, steps, Variant::Free, SEED)));
    }
    group.finish();
}

fn cores(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_core");
    for steps in [100, 1000] {
        group.throughput(Throughput::Elements(steps as u64));
        group.bench_with_input(BenchmarkId::new("n4", steps), &steps, |b, &steps| {
            b.iter(|| random_core(4, steps, SEED).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, walk, cores);
criterion_main!(benches);
