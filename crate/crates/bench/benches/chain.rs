use coxwalk::shi::{absorption_probabilities, build_gamma};
use coxwalk::wchain::{build_chain, stationary_distribution, WeightScheme};
use coxwalk_bench::root_system;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn stationary(c: &mut Criterion) {
    let mut group = c.benchmark_group("stationary");
    group.sample_size(10);
    for tag in ["A3", "B3", "A4"] {
        let rs = root_system(tag);
        let chain = build_chain(&rs, WeightScheme::Uniform).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(tag), &chain, |b, chain| {
            b.iter(|| stationary_distribution(chain).unwrap())
        });
    }
    group.finish();
}

fn shi(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma");
    group.sample_size(10);
    for tag in ["A2", "B2", "A3"] {
        let rs = root_system(tag);
        group.bench_function(tag, |b| {
            b.iter(|| absorption_probabilities(&build_gamma(&rs).unwrap()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, stationary, shi);
criterion_main!(benches);
