use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lemniscate_core::harness::{empirical_vs_equilibrium, sample_equilibrium, sample_gas, SamplerConfig};
use lemniscate_core::LemniscateParams;

fn metropolis(c: &mut Criterion) {
    let p = LemniscateParams::new(2, 0.75, 0.0).unwrap();
    let mut g = c.benchmark_group("sample_gas_20_sweeps");
    g.sample_size(10);
    for n in [100usize, 500] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_gas(&p, n, &SamplerConfig::new(20, 0.05, 1)).unwrap())
        });
    }
    g.finish();
}

fn direct(c: &mut Criterion) {
    let p = LemniscateParams::new(2, 0.75, 0.0).unwrap();
    c.bench_function("equilibrium_2000_with_statistics", |b| {
        b.iter(|| empirical_vs_equilibrium(&sample_equilibrium(&p, 2000, 7), &p, 50).unwrap())
    });
}

criterion_group!(benches, metropolis, direct);
criterion_main!(benches);
