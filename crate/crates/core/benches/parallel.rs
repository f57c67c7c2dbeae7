//! Sequential vs rayon execution on the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use resfluor::correlation::{j_convolution_oracle, spectrum_curve};
use resfluor::grid::{logspace, UniformGrid};
use resfluor::monte_carlo::{
    empirical_correlation_with, empirical_counting_with, generate_stream, generate_stream_with,
};
use resfluor::{AtomDriveParams, Execution};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn stream_generation(c: &mut Criterion) {
    let params = AtomDriveParams::optimal(1.0);
    let mut group = c.benchmark_group("generate_stream");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 100_000), &exec, |b, &exec| {
            b.iter(|| generate_stream_with(black_box(&params), 100_000, 1, exec).unwrap())
        });
    }
    group.finish();
}

fn estimators(c: &mut Criterion) {
    let params = AtomDriveParams::new(1.0, 2.2, 0.0).unwrap();
    let stream = generate_stream(&params, 100_000, 3).unwrap();
    let mut group = c.benchmark_group("estimators");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("correlation", name), &exec, |b, &exec| {
            b.iter(|| empirical_correlation_with(black_box(&stream), 0.05, 10.0, exec).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("counting_bootstrap", name),
            &exec,
            |b, &exec| b.iter(|| empirical_counting_with(black_box(&stream), 200.0, exec).unwrap()),
        );
    }
    group.finish();
}

fn analytic_sweeps(c: &mut Criterion) {
    let params = AtomDriveParams::optimal(1.0);
    let grid = UniformGrid::from_step(1e-3, 4001).unwrap();
    let omegas = logspace(1e-2, 1e2, 100_000).unwrap();
    let mut group = c.benchmark_group("analytic");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(
            BenchmarkId::new("convolution_oracle", name),
            &exec,
            |b, &exec| {
                b.iter(|| j_convolution_oracle(black_box(&params), &grid, 12, exec).unwrap())
            },
        );
        group.bench_with_input(
            BenchmarkId::new("spectrum_sweep", name),
            &exec,
            |b, &exec| b.iter(|| spectrum_curve(black_box(&params), &omegas, exec).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, stream_generation, estimators, analytic_sweeps);
criterion_main!(benches);
