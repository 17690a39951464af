use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lemniscate_bench::representative_params;
use lemniscate_core::asympt::{coefficients, sum_rule};
use lemniscate_core::moments::{log_moment_asymptotic_bulk, log_moment_exact, MomentQuery};

fn coeffs(c: &mut Criterion) {
    let mut g = c.benchmark_group("coefficients");
    for (name, p) in representative_params() {
        g.bench_function(name, |b| b.iter(|| coefficients(&p, black_box(101), 256).unwrap()));
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("moments");
    g.sample_size(10);
    for n in [20usize, 80] {
        let q = MomentQuery::new(n, 0.5, 1.4).unwrap();
        g.bench_with_input(BenchmarkId::new("exact", n), &q, |b, q| b.iter(|| log_moment_exact(q, 256).unwrap()));
        g.bench_with_input(BenchmarkId::new("bulk_3_corrections", n), &n, |b, &n| {
            b.iter(|| log_moment_asymptotic_bulk(n, 0.5, 1.4, 3, 256).unwrap())
        });
    }
    g.finish();
}

fn sum_rules(c: &mut Criterion) {
    let mut g = c.benchmark_group("sum_rule");
    g.sample_size(10);
    let (name, p) = representative_params()[0];
    g.bench_function(name, |b| b.iter(|| sum_rule(&p, 1, 256).unwrap()));
    g.finish();
}

criterion_group!(benches, coeffs, moments, sum_rules);
criterion_main!(benches);
