use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use selinfer::lasso::{
    lambda_path, lasso_fit, posi_all, selective_ci, selective_pvalue, truncnorm_cdf, TruncatedNormalSpec,
    TruncationRegion,
};
use selinfer_bench::{prostate, regression};
use std::hint::black_box;

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("lasso_fit");
    for (n, m) in [(50, 10), (200, 50), (500, 100)] {
        let data = regression(7, n, m, 5);
        let lambda = 0.2 * data.x().tr_mul(data.y()).amax();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n}x{m}")), &data, |b, d| {
            b.iter(|| lasso_fit(d.x(), d.y(), black_box(lambda), 1e-8).unwrap())
        });
    }
    g.finish();
}

fn inference(c: &mut Criterion) {
    let data = prostate();
    let lambda = 0.1 * data.x().tr_mul(data.y()).amax();
    c.bench_function("posi_all/prostate", |b| {
        b.iter(|| posi_all(black_box(&data), lambda).unwrap())
    });

    let qs = posi_all(&data, lambda).unwrap();
    let q = qs.iter().find(|q| q.selected).copied().unwrap();
    c.bench_function("selective_pvalue", |b| {
        b.iter(|| selective_pvalue(black_box(&q), data.sigma2(), 0.0).unwrap())
    });
    c.bench_function("selective_ci", |b| {
        b.iter(|| selective_ci(black_box(&q), data.sigma2(), 0.9).unwrap())
    });

    let tail = TruncatedNormalSpec::new(0.0, 1.0, TruncationRegion::Outside { a: -30.0, b: 30.0 }).unwrap();
    c.bench_function("truncnorm_cdf/deep_tail", |b| {
        b.iter(|| truncnorm_cdf(black_box(31.0), &tail).unwrap())
    });

    let grid: Vec<f64> = (0..50).map(|k| lambda * k as f64 / 49.0).collect();
    c.bench_function("lambda_path/prostate_50", |b| {
        b.iter(|| lambda_path(black_box(&data), &grid, 0.9).unwrap())
    });
}

criterion_group!(benches, solver, inference);
criterion_main!(benches);
