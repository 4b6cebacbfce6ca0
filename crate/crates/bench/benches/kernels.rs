use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qadd_core::analysis::{degradability_certificate, q1, q1_platypus_restricted, Strategy};
use qadd_core::channels::{compose, link_product_compose};
use qadd_core::info::entropy_of;
use qadd_core::numkernel::hermitian_eig;
use qadd_core::random::{random_channel, random_state, Rng};
use qadd_core::zoo::{flagged_ad, platypus};

fn eig(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermitian_eig");
    let mut rng = Rng::new(1);
    for d in [4, 8, 16, 32, 48] {
        let m = random_state(&mut rng, d).into_matrix();
        g.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| b.iter(|| hermitian_eig(black_box(m)).unwrap()));
    }
    g.finish();
    let m = random_state(&mut rng, 16).into_matrix();
    c.bench_function("entropy_16", |b| b.iter(|| entropy_of(black_box(&m))));
}

fn calculus(c: &mut Criterion) {
    let mut rng = Rng::new(2);
    let n1 = random_channel(&mut rng, 3, 3, 3);
    let n2 = random_channel(&mut rng, 3, 3, 3);
    c.bench_function("compose_3x3", |b| b.iter(|| compose(black_box(&n2), black_box(&n1))));
    let (j1, j2) = (n1.choi().clone(), n2.choi().clone());
    c.bench_function("link_product_3x3", |b| {
        b.iter(|| link_product_compose(black_box(&j2), black_box(&j1), (3, 3, 3)).unwrap())
    });
}

fn optimizers(c: &mut Criterion) {
    let n = platypus(0.3, 0.2).unwrap();
    c.bench_function("q1_platypus_restricted", |b| {
        b.iter(|| q1_platypus_restricted(black_box(0.3), black_box(0.2)).unwrap())
    });
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("q1_multistart_platypus", |b| {
        b.iter(|| q1(&n, &Strategy::Multistart { restarts: 4, seed: 0 }).unwrap())
    });
    let phi = flagged_ad(0.7, 0.3, 0.4).unwrap();
    g.bench_function("certificate_flagged_ad", |b| b.iter(|| degradability_certificate(black_box(&phi))));
    g.finish();
}

criterion_group!(benches, eig, calculus, optimizers);
criterion_main!(benches);
