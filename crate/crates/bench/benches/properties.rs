use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gtld::properties::{raw_moment, renyi_entropy, residual_moment, MomentMethod};
use gtld::{Family, GtldModel};

fn integrals(c: &mut Criterion) {
    let gtwe = GtldModel::from_slice(Family::Gtwe, &[0.5, 2.0, 0.5, 0.5]).unwrap();
    let gtw = GtldModel::from_slice(Family::Gtw, &[2.0, 1.0, 2.0, 0.5]).unwrap();
    c.bench_function("renyi gtwe rho=2 cutoff 0.01", |b| {
        b.iter(|| renyi_entropy(&gtwe, black_box(2.0), Some(0.01)))
    });
    c.bench_function("moment gtw r=2 quadrature", |b| {
        b.iter(|| raw_moment(&gtw, black_box(2), MomentMethod::Quadrature))
    });
    c.bench_function("moment gtw r=2 series", |b| {
        b.iter(|| raw_moment(&gtw, black_box(2), MomentMethod::Series))
    });
    c.bench_function("mean residual life gtw", |b| {
        b.iter(|| residual_moment(&gtw, 1, black_box(0.5)))
    });
}

criterion_group!(benches, integrals);
criterion_main!(benches);
