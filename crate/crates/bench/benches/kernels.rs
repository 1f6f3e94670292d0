use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mkdv_bench::{first_step, initial, representative, two_soliton};
use mkdv_core::solver::{solve_cyclic_banded, step};
use mkdv_core::{schemes, NewtonConfig, SchemeFamily};

const SIZES: [usize; 2] = [400, 1600];

fn residual(c: &mut Criterion) {
    let mut g = c.benchmark_group("residual");
    for family in SchemeFamily::ALL {
        let spec = representative(family);
        for m in SIZES {
            let bench = two_soliton(m);
            let field = first_step(&spec, &bench);
            g.bench_with_input(BenchmarkId::new(family.name(), m), &field, |b, f| {
                b.iter(|| schemes::residual(&spec, &bench.grid, black_box(f)).unwrap())
            });
        }
    }
    g.finish();
}

fn jacobian(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobian");
    for family in SchemeFamily::ALL {
        let spec = representative(family);
        let bench = two_soliton(400);
        let field = first_step(&spec, &bench);
        g.bench_function(family.name(), |b| {
            b.iter(|| schemes::jacobian(&spec, &bench.grid, black_box(&field)).unwrap())
        });
    }
    g.finish();
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    for family in [SchemeFamily::EC8, SchemeFamily::EC10] {
        let spec = representative(family);
        for m in SIZES {
            let bench = two_soliton(m);
            let field = first_step(&spec, &bench);
            let jac = schemes::jacobian(&spec, &bench.grid, &field).unwrap();
            let rhs = schemes::residual(&spec, &bench.grid, &field).unwrap().into_values();
            g.bench_with_input(BenchmarkId::new(family.name(), m), &rhs, |b, r| {
                b.iter(|| solve_cyclic_banded(&jac, black_box(r)).unwrap())
            });
        }
    }
    g.finish();
}

fn time_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    let cfg = NewtonConfig::default();
    for family in SchemeFamily::ALL {
        let spec = representative(family);
        let bench = two_soliton(400);
        let u0 = initial(&bench);
        g.bench_function(family.name(), |b| {
            b.iter(|| step(&spec, &bench.grid, None, black_box(&u0), &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, residual, jacobian, solve, time_step);
criterion_main!(kernels);
