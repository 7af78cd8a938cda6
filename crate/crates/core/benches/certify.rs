//! Sequential against parallel execution for the data-parallel loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polypick::geometry::{generate_nodes, GridConfig};
use polypick::polynomial::{is_stable_with, StabilityGrid};
use polypick::rif::InnerSample;
use polypick::sample::random_rif;
use polypick::verify::{certify_uniqueness_with, Tolerances};
use polypick::Execution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (label, n, big_n, deg) in [("n2_N3", 2, 3, 2), ("n3_N2", 3, 2, 1)] {
        let f = random_rif(&mut ChaCha8Rng::seed_from_u64(1), n, deg);
        let grid = generate_nodes(big_n, n, &GridConfig::default()).unwrap();
        let tol = Tolerances::default();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, label), &exec, |b, &exec| {
                b.iter(|| certify_uniqueness_with(black_box(&f), &grid, &tol, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability");
    let f = random_rif(&mut ChaCha8Rng::seed_from_u64(2), 3, 2);
    let grid = StabilityGrid::for_nvars(3);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| is_stable_with(black_box(f.q()), &grid, exec).unwrap()));
    }
    group.finish();
}

fn inner_validation(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate_inner");
    let f = random_rif(&mut ChaCha8Rng::seed_from_u64(3), 2, 3);
    let sample = InnerSample::default();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| f.validate_inner_with(black_box(&sample), exec)));
    }
    group.finish();
}

criterion_group!(benches, certify, stability, inner_validation);
criterion_main!(benches);
