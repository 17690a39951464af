use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lemniscate_bench::representative_params;
use lemniscate_core::exact::{log_z_gram, log_z_lemniscate, ortho_norms};
use lemniscate_core::BigReal;

fn log_z(c: &mut Criterion) {
    let mut g = c.benchmark_group("log_z_lemniscate");
    g.sample_size(10);
    for (name, p) in representative_params() {
        for n in [40usize, 160] {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| log_z_lemniscate(black_box(n), &p, 256).unwrap())
            });
        }
    }
    g.finish();
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("ortho_norms");
    g.sample_size(10);
    let (cc, a) = (BigReal::from_f64(0.7, 256), BigReal::from_f64(0.9, 256));
    for n in [20usize, 80] {
        for bits in [128u32, 512] {
            g.bench_with_input(BenchmarkId::new(format!("{bits}bits"), n), &n, |b, &n| {
                b.iter(|| ortho_norms(n, &cc, &a, n, bits).unwrap())
            });
        }
    }
    g.finish();
}

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("log_z_gram");
    g.sample_size(10);
    let (name, p) = representative_params()[2];
    g.bench_function(BenchmarkId::new(name, 12), |b| b.iter(|| log_z_gram(black_box(12), &p, 256).unwrap()));
    g.finish();
}

criterion_group!(benches, log_z, norms, gram);
criterion_main!(benches);
