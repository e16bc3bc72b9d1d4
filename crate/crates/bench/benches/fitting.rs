use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gtld::data::builtin;
use gtld::{fit, Family, FitOptions, GtldModel, Method};

fn fits(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    let gauge = builtin("gauge").unwrap();
    let options = FitOptions::default();
    group.bench_function("gauge gtwe ml", |b| {
        b.iter(|| fit(black_box(&gauge), Family::Gtwe, Method::Ml, &options))
    });
    let sample = GtldModel::from_slice(Family::Gte, &[1.0, 2.0, 0.3])
        .unwrap()
        .sample(200, 1)
        .unwrap();
    for method in Method::ALL {
        group.bench_function(format!("gte n=200 {method}"), |b| {
            b.iter(|| fit(black_box(&sample), Family::Gte, method, &options))
        });
    }
    group.finish();
}

criterion_group!(benches, fits);
criterion_main!(benches);
