//! Hot-path microbenchmarks: Pfaffians, the L1 linear program, basis
//! construction and sampler throughput.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flonl::channels::{ptm_noisy_rot_zz, BasisChannelSet};
use flonl::nonlinearity::{solve_l1, DEFAULT_RESIDUAL_TOL};
use flonl::sampler::{circuit_l1_total, run};
use flonl::{pfaffian, CircuitIR, DecompositionCache, Gate, Observable, SampleBudget};

fn antisymmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

fn bench_pfaffian(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut group = c.benchmark_group("pfaffian");
    for n in [8usize, 16, 32, 64] {
        let m = antisymmetric(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| pfaffian(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn bench_lp(c: &mut Criterion) {
    let basis = BasisChannelSet::standard();
    c.bench_function("solve_l1 noisy rotation", |b| {
        b.iter(|| {
            let target = ptm_noisy_rot_zz(black_box(0.3), black_box(0.05)).unwrap();
            solve_l1(&target, &basis, DEFAULT_RESIDUAL_TOL).unwrap()
        })
    });
}

fn bench_basis(c: &mut Criterion) {
    c.bench_function("standard basis construction", |b| {
        b.iter(BasisChannelSet::standard)
    });
}

fn bench_sampler(c: &mut Criterion) {
    let circuit = CircuitIR {
        n_modes: 3,
        init: vec![1, 0, 0],
        gates: vec![
            Gate::GaussianRotation {
                idx: [2, 5],
                angle: 0.4,
                noise_p: 0.0,
            },
            Gate::FourBodyRotation {
                idx: [1, 2, 3, 4],
                angle: 0.3,
                noise_p: 0.02,
            },
            Gate::FourBodyRotation {
                idx: [3, 4, 5, 6],
                angle: -0.2,
                noise_p: 0.05,
            },
        ],
        observable: Observable::Pauli("ZZZ".into()),
    };
    let cache = DecompositionCache::standard();
    // decompose up front so the loop measures sampling alone
    circuit_l1_total(&circuit, &cache).unwrap();

    let mut group = c.benchmark_group("sampler");
    group.throughput(Throughput::Elements(10_000));
    group.bench_function("three-mode noisy circuit", |b| {
        b.iter(|| run(&circuit, &cache, SampleBudget::Fixed(10_000), black_box(1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_pfaffian, bench_lp, bench_basis, bench_sampler);
criterion_main!(benches);
