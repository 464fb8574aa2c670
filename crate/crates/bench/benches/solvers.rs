use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equicert::identities::s;
use equicert::maxent::{solve_handelman, solve_putinar, solve_simplex, SolverOptions};
use equicert::UPoly;

fn solvers(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let mut group = c.benchmark_group("solve_handelman");
    for n in [2usize, 5, 8] {
        let target = UPoly::constant(s(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| solve_handelman(black_box(&target), n, &opts).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("solve_putinar");
    for n in [2usize, 5, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| solve_putinar(black_box(n), None, &opts).unwrap())
        });
    }
    group.finish();

    c.bench_function("solve_simplex/d3n3", |b| b.iter(|| solve_simplex(black_box(3), 3, &opts).unwrap()));
}

criterion_group!(benches, solvers);
criterion_main!(benches);
