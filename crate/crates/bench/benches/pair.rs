use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use formclass_bench::{dense_pair, r7_domain, r7_point, singular_lagrangian_eta};
use formclass_core::pair::classify;
use formclass_core::precontact::precontact_report;
use formclass_core::scan::grid_scan;
use std::hint::black_box;

fn classify_pointwise(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for dim in [3, 5, 7] {
        let (tau, omega) = dense_pair(dim, 7);
        group.bench_with_input(BenchmarkId::new("dense", dim), &(tau, omega), |b, (t, w)| {
            b.iter(|| classify(black_box(t), black_box(w)).unwrap())
        });
    }
    let eta = singular_lagrangian_eta();
    let p = r7_point();
    let (t, w) = (eta.evaluate(&p).unwrap(), eta.exterior_derivative().evaluate(&p).unwrap());
    group.bench_function("singular_lagrangian", |b| b.iter(|| classify(black_box(&t), black_box(&w)).unwrap()));
    group.finish();
}

fn wedge_powers(c: &mut Criterion) {
    let mut group = c.benchmark_group("wedge_power");
    for dim in [4, 6, 8] {
        let (_, omega) = dense_pair(dim, 11);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &omega, |b, w| {
            b.iter(|| black_box(w).wedge_power(dim / 2))
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let eta = singular_lagrangian_eta();
    let deta = eta.exterior_derivative();
    let dom = r7_domain();
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("grid_r7", |b| b.iter(|| grid_scan(&eta, &deta, black_box(&dom)).unwrap()));
    group.bench_function("precontact_r7", |b| b.iter(|| precontact_report(&eta, black_box(&dom)).unwrap()));
    group.finish();
}

criterion_group!(benches, classify_pointwise, wedge_powers, scans);
criterion_main!(benches);
