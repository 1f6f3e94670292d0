//! Shared fixtures for the kernel benchmarks in `benches/`.

use mkdv_core::analysis::{Benchmark, Problem};
use mkdv_core::{GridFunction, NewtonConfig, SchemeFamily, SchemeSpec, TwoLevelField};

/// Two-soliton benchmark with `m` nodes on the standard domain and the
/// standard Courant ratio `dt = dx / 4`.
pub fn two_soliton(m: usize) -> Benchmark {
    let (a, b, t) = Problem::TwoSoliton.domain();
    let dx = (b - a) / m as f64;
    Benchmark::new(Problem::TwoSoliton, a, b, dx, dx / 4.0, t).expect("valid benchmark grid")
}

/// A representative member of each family.
pub fn representative(family: SchemeFamily) -> SchemeSpec {
    let lambda = match family {
        SchemeFamily::EC8 => 1.0,
        SchemeFamily::MC8 => -0.077,
        SchemeFamily::EC10 => 0.04,
        SchemeFamily::MC10 => 0.19,
        _ => 0.0,
    };
    SchemeSpec::new(family, lambda).expect("valid representative")
}

/// Initial data and the first converged step, as a two-level field.
pub fn first_step(spec: &SchemeSpec, bench: &Benchmark) -> TwoLevelField {
    let u0 = bench.initial();
    let out = mkdv_core::solver::step(spec, &bench.grid, None, &u0, &NewtonConfig::default()).expect("step converges");
    TwoLevelField::new(u0, out.state).expect("matching levels")
}

pub fn initial(bench: &Benchmark) -> GridFunction {
    bench.initial()
}
