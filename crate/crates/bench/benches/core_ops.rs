use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use expdist::bound_engine::certify;
use expdist::hermite_pade::hp_coefficients;
use expdist::interp::InterpolationSystem;
use expdist_bench::{feasible_cell, integer_nodes};

fn bench_certify(c: &mut Criterion) {
    let (alpha, beta, e) = feasible_cell();
    c.bench_function("certify_small_cell", |b| {
        b.iter(|| certify(black_box(&alpha), black_box(&beta), 3, 2, black_box(&e), 128).unwrap())
    });
}

fn bench_order_matrix(c: &mut Criterion) {
    c.bench_function("order_matrix_cofactors_4x4", |b| {
        b.iter(|| InterpolationSystem::new(black_box(4), black_box(4)).unwrap())
    });
}

fn bench_hp_coefficients(c: &mut Criterion) {
    let nodes = integer_nodes(4);
    let params = [3u32; 4];
    c.bench_function("hp_coefficients_sigma_12", |b| {
        b.iter(|| hp_coefficients(black_box(&nodes), black_box(&params)).unwrap())
    });
}

criterion_group!(benches, bench_certify, bench_order_matrix, bench_hp_coefficients);
criterion_main!(benches);
