use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rspin_bench::{correlator_cases, givental_cases};
use rspin_core::frobenius::Shift;
use rspin_core::genus0::{correlator_sl2, correlator_wdvv};
use rspin_core::relations::verify_ma_triangular;
use rspin_core::rmatrix::{b_series, r_matrix};
use rspin_core::strata::givental::givental_degree_part;
use rspin_core::strata::graph::enumerate_stable_graphs;
use rspin_core::witten::r0_limit_bernoulli;

fn correlators(c: &mut Criterion) {
    let mut group = c.benchmark_group("correlator");
    for (r, a) in correlator_cases() {
        let id = format!("r{r}_n{}", a.len());
        group.bench_with_input(BenchmarkId::new("sl2", &id), &(r, &a), |b, (r, a)| b.iter(|| correlator_sl2(*r, a)));
        group.bench_with_input(BenchmarkId::new("wdvv", &id), &(r, &a), |b, (r, a)| b.iter(|| correlator_wdvv(*r, a)));
    }
    group.finish();
}

fn series(c: &mut Criterion) {
    c.bench_function("b_series_r7_order40", |b| b.iter(|| b_series(black_box(7), 2, 40)));
    for shift in [Shift::TauLast, Shift::TauSecond] {
        c.bench_function(&format!("r_matrix_{shift}_r6_order10"), |b| b.iter(|| r_matrix(black_box(6), shift, 10)));
    }
}

fn graphs(c: &mut Criterion) {
    c.bench_function("stable_graphs_g2_n2", |b| b.iter(|| enumerate_stable_graphs(black_box(2), 2, 4)));
    let mut group = c.benchmark_group("givental");
    group.sample_size(10);
    for (r, g, a, d) in givental_cases() {
        let id = format!("r{r}_g{g}_a{a:?}_d{d}");
        group.bench_function(id, |b| b.iter(|| givental_degree_part(r, Shift::TauSecond, g, &a, d)));
    }
    group.finish();
}

fn limits(c: &mut Criterion) {
    let mut group = c.benchmark_group("limits");
    group.sample_size(10);
    group.bench_function("r0_limit_g2_a2", |b| b.iter(|| r0_limit_bernoulli(2, &[2])));
    group.bench_function("verify_ma_d6", |b| b.iter(|| verify_ma_triangular(black_box(6))));
    group.finish();
}

criterion_group!(benches, correlators, series, graphs, limits);
criterion_main!(benches);
