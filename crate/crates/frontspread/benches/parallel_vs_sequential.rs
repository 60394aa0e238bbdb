//! Compares the data-parallel time step against the sequential fallback at
//! several grid sizes.  With the default `parallel` feature, `step` fans out
//! over rayon; `step_sequential` is the plain loop that is always compiled.
//! Run `cargo bench --no-default-features` to measure `step` without rayon.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use frontspread::model::{InitialProfile, NonlinearityModel};
use frontspread::solver::{step, step_sequential};

fn grid(n: usize) -> (Vec<f64>, Vec<f64>) {
    let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
    let profile = InitialProfile::algebraic(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
    let _ = &model;
    let dx = 0.1;
    let x_left = -10.0;
    let values: Vec<f64> = (0..n).map(|i| profile.eval(x_left + i as f64 * dx)).collect();
    let scratch = vec![0.0; n];
    (values, scratch)
}

fn bench_steps(c: &mut Criterion) {
    let model = NonlinearityModel::canonical(1.0, 1.5, 1.0).unwrap();
    let dx = 0.1;
    let dt = 0.4 * dx * dx;
    let mut group = c.benchmark_group("time_step");
    for &n in &[1_000usize, 10_000, 100_000] {
        group.throughput(Throughput::Elements(n as u64));
        let (values, mut scratch) = grid(n);
        group.bench_with_input(BenchmarkId::new("parallel_feature", n), &n, |b, _| {
            b.iter(|| step(&model, &values, &mut scratch, dx, dt, 1.0))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| step_sequential(&model, &values, &mut scratch, dx, dt, 1.0))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_steps);
criterion_main!(benches);
