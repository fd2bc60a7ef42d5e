use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sandpile_core::dlp::{random_instance, random_recurrent, shokrieh_solve_with, SolveOptions};
use sandpile_core::exactmath::{pseudoinverse, smith_normal_form};
use sandpile_core::graphs::{reduced_laplacian, square_cycle, wheel};
use sandpile_core::sandpile::odd_wheel_generators;
use sandpile_core::Sandpile;

fn pseudoinverses(c: &mut Criterion) {
    let mut group = c.benchmark_group("pseudoinverse");
    for n in [15, 29, 45] {
        let l = wheel(n).unwrap().laplacian();
        group.bench_with_input(BenchmarkId::new("wheel", n), &l, |b, l| b.iter(|| pseudoinverse(black_box(l))));
    }
    group.finish();
}

fn smith_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [10, 20, 40] {
        let g = square_cycle(n).unwrap();
        let lr = reduced_laplacian(&g, 0).unwrap();
        group.bench_with_input(BenchmarkId::new("square_cycle", n), &lr, |b, m| b.iter(|| smith_normal_form(black_box(m))));
    }
    group.finish();
}

fn wheel_solves(c: &mut Criterion) {
    let mut group = c.benchmark_group("wheel_solve");
    group.sample_size(20);
    for n in [29, 37, 45] {
        let sp = Sandpile::with_default_sink(wheel(n).unwrap());
        let p = pseudoinverse(&sp.graph().laplacian()).unwrap();
        let gens: Vec<_> = odd_wheel_generators(&sp).unwrap().iter().map(|g| sp.config_to_divisor(g)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let (inst, _) = random_instance(&sp, &mut rng).unwrap();
        let inst = inst.with_generators(gens);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| shokrieh_solve_with(black_box(&inst), &p, SolveOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn stabilization(c: &mut Criterion) {
    let mut group = c.benchmark_group("group_add");
    for n in [7, 29, 45] {
        let sp = Sandpile::with_default_sink(wheel(n).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_recurrent(&sp, &mut rng).unwrap();
        let b2 = random_recurrent(&sp, &mut rng).unwrap();
        group.bench_function(BenchmarkId::new("wheel", n), |b| b.iter(|| sp.add(black_box(&a), black_box(&b2)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, pseudoinverses, smith_forms, wheel_solves, stabilization);
criterion_main!(benches);
