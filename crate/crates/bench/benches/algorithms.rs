use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dstcover::exact::brute_force_set_cover;
use dstcover::rational::Rational;
use dstcover::reductions::run_pipeline;
use dstcover::{dreyfus_wagner_directed, dst_approx, greedy_set_cover, DstApproxOptions};
use dstcover_bench::{pipeline_config, planted_game, set_cover, steiner, SEED};

fn set_cover_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("set_cover");
    for n in [64usize, 256, 1024] {
        let sc = set_cover(n, n / 2);
        g.bench_with_input(BenchmarkId::new("greedy", n), &sc, |b, sc| b.iter(|| greedy_set_cover(black_box(sc)).unwrap()));
    }
    let small = set_cover(16, 16);
    g.bench_function("branch_and_bound/16", |b| b.iter(|| brute_force_set_cover(black_box(&small)).unwrap()));
    g.finish();
}

fn steiner_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("steiner");
    g.sample_size(10);
    for terminals in [6usize, 10, 14] {
        let d = steiner(40, terminals);
        g.bench_with_input(BenchmarkId::new("dreyfus_wagner", terminals), &d, |b, d| {
            b.iter(|| dreyfus_wagner_directed(black_box(d), d.root(), d.terminals()).unwrap())
        });
    }
    let opts = DstApproxOptions::new(Rational::new(1, 2));
    for terminals in [8usize, 12, 16] {
        let d = steiner(30, terminals);
        g.bench_with_input(BenchmarkId::new("dst_approx", terminals), &d, |b, d| {
            b.iter(|| dst_approx(black_box(d), &opts).unwrap())
        });
    }
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduction");
    g.sample_size(10);
    let (lc, planted) = planted_game();
    for u in [8u64, 16] {
        let config = pipeline_config(u);
        g.bench_with_input(BenchmarkId::new("pipeline", u), &config, |b, config| {
            b.iter(|| run_pipeline(black_box(&lc), Rational::new(1, 2), Rational::new(1, 4), SEED, config, Some(&planted)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, set_cover_solvers, steiner_solvers, reduction);
criterion_main!(benches);
