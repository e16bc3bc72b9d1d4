use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gtld_bench::representative_models;

fn pointwise(c: &mut Criterion) {
    let mut group = c.benchmark_group("pointwise");
    for m in representative_models() {
        let x = m.quantile(0.5).unwrap();
        let id = m.family().id();
        group.bench_with_input(BenchmarkId::new("cdf", id), &x, |b, &x| {
            b.iter(|| m.cdf(black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("ln_pdf", id), &x, |b, &x| {
            b.iter(|| m.ln_pdf(black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("quantile", id), &0.37, |b, &p| {
            b.iter(|| m.quantile(black_box(p)))
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let m = &representative_models()[4];
    c.bench_function("sample gtwe n=1000", |b| {
        b.iter(|| m.sample(1000, black_box(7)))
    });
}

criterion_group!(benches, pointwise, sampling);
criterion_main!(benches);
