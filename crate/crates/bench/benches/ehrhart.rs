use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use reciprocone::{count, hilbert_series, quasipolynomial, reciprocity_check, Mode};
use reciprocone_bench::thin_simplex;

fn ehrhart(c: &mut Criterion) {
    let p = thin_simplex();
    c.bench_function("count/simplex/t=24", |b| {
        b.iter(|| count(black_box(&p), 24, Mode::Closed))
    });
    c.bench_function("quasipolynomial/simplex", |b| {
        b.iter(|| quasipolynomial(black_box(&p), Mode::Closed).unwrap())
    });
    c.bench_function("reciprocity/simplex/T=12", |b| {
        b.iter(|| reciprocity_check(black_box(&p), 12).unwrap())
    });
    c.bench_function("hilbert/simplex", |b| {
        b.iter(|| hilbert_series(black_box(&p), Mode::Closed).unwrap())
    });
}

criterion_group!(benches, ehrhart);
criterion_main!(benches);
