use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use selinfer::datasplit::{q_values, solve_alpha_prime, SplitPValues};
use selinfer::procedures::{bh, mabh2};
use selinfer::toy::{toy_reject, ToyConfig, ToyVariant};
use selinfer::winner::{run_procedure, WinnerProcedure};
use selinfer_bench::pvalues;
use std::hint::black_box;

fn step_up(c: &mut Criterion) {
    let mut g = c.benchmark_group("bh");
    for n in [100, 1_000, 10_000] {
        let p = pvalues(1, n, n / 10, 3.0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| bh(black_box(p), 0.1).unwrap())
        });
    }
    g.finish();
}

fn winner(c: &mut Criterion) {
    let p = pvalues(2, 100, 5, 3.0);
    let mut g = c.benchmark_group("winner");
    for proc in WinnerProcedure::ALL {
        g.bench_function(proc.label(), |b| {
            b.iter(|| run_procedure(proc, black_box(&p), 0.05).unwrap())
        });
    }
    g.finish();
}

fn toy_and_split(c: &mut Criterion) {
    let cfg = ToyConfig::new(0.7, 0.3).unwrap();
    c.bench_function("toy/selective-improved-fdr", |b| {
        b.iter(|| toy_reject(black_box(0.12), black_box(0.4), &cfg, ToyVariant::SelectiveImprovedFdr).unwrap())
    });
    c.bench_function("mabh2", |b| {
        b.iter(|| mabh2(black_box(0.12), black_box(0.4), 0.3).unwrap())
    });

    let sp = SplitPValues::new(pvalues(3, 20, 5, 2.0), pvalues(4, 20, 5, 2.0)).unwrap();
    c.bench_function("datasplit/q_values", |b| {
        b.iter(|| q_values(black_box(&sp), 0.5).unwrap())
    });
    c.bench_function("calibrate", |b| {
        b.iter(|| solve_alpha_prime(black_box(0.05), black_box(0.5)).unwrap())
    });
}

criterion_group!(benches, step_up, winner, toy_and_split);
criterion_main!(benches);
