use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equicert::identities::{verify_pell, verify_simplex_unity, verify_unity_interval, UnityVariant};
use equicert::momatrix::{invert_exact, moment_matrix};
use equicert::{MeasureId, MomentFunctional};

fn hankel_inversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("invert_exact/arcsine");
    for n in [4u32, 8, 12, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let f = MomentFunctional::new(MeasureId::Arcsine).unwrap();
            let m = moment_matrix(&f, n, None).unwrap();
            b.iter(|| invert_exact(black_box(&m)).unwrap())
        });
    }
    group.finish();
}

fn identities(c: &mut Criterion) {
    c.bench_function("verify_pell/64", |b| b.iter(|| verify_pell(black_box(64))));
    c.bench_function("verify_unity_interval/cheby2/12", |b| {
        b.iter(|| verify_unity_interval(black_box(12), UnityVariant::Cheby2))
    });
    c.bench_function("verify_simplex_unity/d5n2", |b| {
        b.iter(|| verify_simplex_unity(black_box(5), 2).unwrap())
    });
}

criterion_group!(benches, hankel_inversion, identities);
criterion_main!(benches);
