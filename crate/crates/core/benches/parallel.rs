use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multirot::boxdim::{covering_profile_with, scaled_covering_sweep};
use multirot::diophantine::kxn_separation_with;
use multirot::exact::BasisTable;
use multirot::ifs::LineIFS;
use multirot::orbit::{generate_orbit, StepSystem, Strategy};
use multirot::{Exec, Phase};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn orbit_points(n: usize) -> Vec<Phase> {
    let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
    let steps = StepSystem::parse(&b, &["sqrt2", "sqrt3"]).unwrap();
    generate_orbit(&steps, &Strategy::Random { seed: 1 }, n, 128).unwrap().points().to_vec()
}

fn covering(c: &mut Criterion) {
    let pts = orbit_points(1 << 20);
    let mut g = c.benchmark_group("covering_profile");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| covering_profile_with(black_box(&pts), 4, 30, exec).unwrap())
        });
    }
    g.finish();
}

fn separation(c: &mut Criterion) {
    let pts = orbit_points(1 << 16);
    let mut g = c.benchmark_group("kxn_separation");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| kxn_separation_with(black_box(&pts), 1, 256, exec).unwrap())
        });
    }
    g.finish();
}

fn scaled_sweep(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sets: Vec<Vec<Phase>> = (0..64).map(|_| (0..rng.gen_range(1..=256)).map(|_| Phase(rng.gen())).collect()).collect();
    let mut g = c.benchmark_group("scaled_covering_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scaled_covering_sweep(black_box(&sets), 16, 12, exec).unwrap())
        });
    }
    g.finish();
}

fn attractor(c: &mut Criterion) {
    let e = LineIFS::from_triples(&[((1, 5), 1, (0, 1)), ((1, 5), 1, (2, 5)), ((1, 5), 1, (4, 5))]).unwrap();
    let mut g = c.benchmark_group("attractor_sample");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| b.iter(|| e.attractor_sample_with(black_box(10), exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, covering, separation, scaled_sweep, attractor);
criterion_main!(benches);
