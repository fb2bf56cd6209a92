//! Criterion suite for the search kernels and the solver.
//!
//! Run with the default features for the rayon-backed numbers and with
//! `--no-default-features` for the sequential fallback; the benchmark names
//! are identical so the two runs compare directly.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gallai_core::{
    count_avoiding, enumerate_witnesses, find_mono_rectangle, find_mono_square, solve_avoidance,
    AvoidanceInstance, Configuration, GridColoring, SolveOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_grid(width: u32, height: u32, colors: u32, seed: u64) -> GridColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridColoring::from_fn(width, height, colors, |_, _| rng.gen_range(0..colors) as u8).unwrap()
}

fn bench_grid_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_search");
    for (w, h, k) in [(64, 64, 4), (256, 256, 8)] {
        let grid = random_grid(w, h, k, 0xBEEF);
        group.bench_with_input(
            BenchmarkId::new("find_mono_rectangle", format!("{w}x{h}x{k}")),
            &grid,
            |b, g| b.iter(|| find_mono_rectangle(g)),
        );
        group.bench_with_input(
            BenchmarkId::new("find_mono_square", format!("{w}x{h}x{k}")),
            &grid,
            |b, g| b.iter(|| find_mono_square(g)),
        );
    }
    let grid = random_grid(48, 48, 3, 0xF00D);
    let square = Configuration::square();
    group.bench_function("enumerate_witnesses/48x48x3", |b| {
        b.iter(|| enumerate_witnesses(&grid, &square).count())
    });
    group.finish();
}

fn bench_exhaustive_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_avoiding");
    group.sample_size(10);
    let square = Configuration::square();
    for (w, h) in [(4, 4), (5, 4)] {
        group.bench_function(format!("{w}x{h}x2"), |b| {
            b.iter(|| count_avoiding(w, h, 2, &square).unwrap())
        });
    }
    group.finish();
}

fn bench_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_avoidance");
    group.sample_size(10);
    let square = Configuration::square();
    for threads in [1usize, 4] {
        group.bench_function(format!("10x10x2/threads={threads}"), |b| {
            b.iter(|| {
                let options = SolveOptions { threads, ..SolveOptions::default() };
                let instance =
                    AvoidanceInstance::new(10, 10, 2, square.clone(), options).unwrap();
                assert!(solve_avoidance(&instance).is_satisfiable());
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_grid_search, bench_exhaustive_count, bench_solver);
criterion_main!(benches);
