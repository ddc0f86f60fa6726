//! Parallel vs sequential solver comparison.
//!
//! Run with `cargo bench` (the `parallel` feature is on by default); with
//! `--no-default-features` both sides use the sequential implementation.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quboku::queens::build_nqueens;
use quboku::solve::{
    solve_anneal, solve_anneal_seq, solve_exhaustive, solve_exhaustive_seq, AnnealParams,
};
use quboku::Qubo;

fn bench_exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);

    let four = build_nqueens(4); // 16 variables
    group.bench_function("nqueens4/seq", |b| {
        b.iter(|| solve_exhaustive_seq(&four, 8).unwrap())
    });
    group.bench_function("nqueens4/par", |b| {
        b.iter(|| solve_exhaustive(&four, 8).unwrap())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dense = Qubo::random(20, 0.4, &mut rng); // 2^20 assignments
    group.bench_function("random20/seq", |b| {
        b.iter(|| solve_exhaustive_seq(&dense, 8).unwrap())
    });
    group.bench_function("random20/par", |b| {
        b.iter(|| solve_exhaustive(&dense, 8).unwrap())
    });
    group.finish();
}

fn bench_anneal(c: &mut Criterion) {
    let mut group = c.benchmark_group("anneal");
    group.sample_size(10);

    let six = build_nqueens(6); // 36 variables
    let params = AnnealParams {
        restarts: 16,
        sweeps: 400,
        ..AnnealParams::default()
    };
    group.bench_function("nqueens6/seq", |b| {
        b.iter(|| solve_anneal_seq(&six, &params).unwrap())
    });
    group.bench_function("nqueens6/par", |b| {
        b.iter(|| solve_anneal(&six, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_exhaustive, bench_anneal);
criterion_main!(benches);
