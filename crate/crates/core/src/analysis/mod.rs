//! Exact benchmark solutions, error metrics, peak tracking, parameter sweeps
//! and convergence studies.

mod exact;
mod metrics;
mod peaks;
mod study;

pub use exact::{breather_potential, exact_breather, exact_two_soliton, TwoSolitonParams};
pub use metrics::{invariant_errors, solution_error, ErrorReport, InvariantErrors, PhaseErrors};
pub use peaks::{exact_peaks, peak_location, peak_location_in, phase_errors, PEAK_WINDOW};
pub use study::{
    convergence_order, evaluate, integrate_benchmark, objective_value, run_benchmark, sweep_lambda, Benchmark,
    BenchmarkRun, Objective, Problem, SweepOptions, SweepResult,
};
