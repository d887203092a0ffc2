use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spreadlab_core::constructions::extremal_matrix;
use spreadlab_core::parallel::Execution;
use spreadlab_core::search::{
    falsify, minimize_spread, sample_cn, stream_rng, FalsifyConfig, Method, SearchConfig,
};
use spreadlab_core::spectral::{eigenvalues, spectrum_with_policy, EigenConfig, SpectrumPolicy};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_falsify(c: &mut Criterion) {
    let mut group = c.benchmark_group("falsify");
    group.sample_size(10);
    for n in [4, 8] {
        for (name, exec) in MODES {
            let cfg = FalsifyConfig {
                execution: exec,
                ..FalsifyConfig::new(n, 1000, 42)
            };
            group.bench_with_input(BenchmarkId::new(name, n), &cfg, |b, cfg| {
                b.iter(|| black_box(falsify(cfg).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize_spread");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SearchConfig {
            n: 6,
            seed: 7,
            restarts: 16,
            iters_per_restart: 500,
            method: Method::NelderMead,
            execution: exec,
            ..Default::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| black_box(minimize_spread(&cfg).unwrap()))
        });
    }
    group.finish();
}

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigen");
    let cfg = EigenConfig::default();
    for n in [4, 8, 12] {
        let a = sample_cn(n, &mut stream_rng(1, n as u64), 1.0).unwrap();
        group.bench_with_input(BenchmarkId::new("qr", n), a.dense(), |b, m| {
            b.iter(|| black_box(eigenvalues(m, &cfg).unwrap()))
        });
        let e = extremal_matrix(n).unwrap();
        group.bench_with_input(BenchmarkId::new("exact_extremal", n), &e, |b, m| {
            b.iter(|| {
                black_box(
                    spectrum_with_policy(m.dense(), m.exact(), SpectrumPolicy::Exact, &cfg)
                        .unwrap(),
                )
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_falsify, bench_search, bench_eigen);
criterion_main!(benches);
