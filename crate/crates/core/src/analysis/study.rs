//! Benchmark runs, parameter sweeps and convergence studies.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::exact::{exact_breather, exact_two_soliton, TwoSolitonParams};
use super::metrics::{invariant_errors, solution_error, ErrorReport};
use super::peaks::phase_errors;
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::schemes::{Law, SchemeFamily, SchemeSpec};
use crate::solver::{integrate_strided, NewtonConfig, Trajectory};
use crate::verify::log_log_slope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    TwoSoliton,
    Breather,
}

impl Problem {
    pub fn id(self) -> &'static str {
        match self {
            Problem::TwoSoliton => "two_soliton",
            Problem::Breather => "breather",
        }
    }

    pub fn exact(self, x: f64, t: f64) -> f64 {
        match self {
            Problem::TwoSoliton => exact_two_soliton(&TwoSolitonParams::default(), x, t),
            Problem::Breather => exact_breather(x, t),
        }
    }

    /// Standard domain `(a, b)` and final time.
    pub fn domain(self) -> (f64, f64, f64) {
        match self {
            Problem::TwoSoliton => (-20.0, 20.0, 10.0),
            Problem::Breather => (-2.0, 2.0, 0.4),
        }
    }

    /// Standard `(dx, dt)`.
    pub fn steps(self) -> (f64, f64) {
        match self {
            Problem::TwoSoliton => (0.1, 0.025),
            Problem::Breather => (0.02, 0.002),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "two_soliton" | "twosoliton" => Ok(Problem::TwoSoliton),
            "breather" => Ok(Problem::Breather),
            _ => Err(Error::InvalidArgument(format!("unknown problem '{s}'"))),
        }
    }
}

/// A benchmark problem on a concrete grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Benchmark {
    pub problem: Problem,
    pub grid: Grid,
    pub t_final: f64,
}

impl Benchmark {
    pub fn new(problem: Problem, a: f64, b: f64, dx: f64, dt: f64, t_final: f64) -> Result<Self> {
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return Err(Error::InvalidArgument(format!("final time must be non-negative, got {t_final}")));
        }
        Ok(Self {
            problem,
            grid: Grid::with_spacing(a, b, dx, dt)?,
            t_final,
        })
    }

    /// Standard domain and final time with the given steps.
    pub fn with_steps(problem: Problem, dx: f64, dt: f64) -> Result<Self> {
        let (a, b, t) = problem.domain();
        Self::new(problem, a, b, dx, dt, t)
    }

    pub fn standard(problem: Problem) -> Self {
        let (dx, dt) = problem.steps();
        Self::with_steps(problem, dx, dt).expect("standard benchmark is valid")
    }

    /// `N = round(T / dt)`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.grid.dt()).round() as usize
    }

    pub fn exact_at(&self, t: f64) -> GridFunction {
        self.grid.sample(|x| self.problem.exact(x, t))
    }

    pub fn initial(&self) -> GridFunction {
        self.exact_at(0.0)
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkRun {
    pub trajectory: Trajectory,
    pub report: ErrorReport,
}

pub fn integrate_benchmark(spec: &SchemeSpec, bench: &Benchmark, stride: usize, cfg: &NewtonConfig) -> Result<Trajectory> {
    integrate_strided(spec, &bench.grid, &bench.initial(), bench.n_steps(), stride, cfg)
}

/// Full error report of a finished trajectory. Phase errors are computed for
/// the two-soliton problem only.
pub fn evaluate(bench: &Benchmark, traj: &Trajectory) -> Result<ErrorReport> {
    let t = traj.final_time();
    let sol_err = solution_error(traj.final_state(), &bench.exact_at(t))?;
    let phase = match bench.problem {
        Problem::TwoSoliton => Some(phase_errors(
            &bench.grid,
            traj.final_state(),
            &TwoSolitonParams::default(),
            t,
        )?),
        Problem::Breather => None,
    };
    Ok(ErrorReport::new(sol_err, invariant_errors(traj), phase))
}

pub fn run_benchmark(spec: &SchemeSpec, bench: &Benchmark, stride: usize, cfg: &NewtonConfig) -> Result<BenchmarkRun> {
    let trajectory = integrate_benchmark(spec, bench, stride, cfg)?;
    let report = evaluate(bench, &trajectory)?;
    Ok(BenchmarkRun { trajectory, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    SolutionError,
    /// The invariant the family does not preserve (momentum for EC, energy
    /// for MC).
    UnpreservedInvariant,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "solution_error" | "sol_err" => Ok(Objective::SolutionError),
            "unpreserved_invariant" | "invariant" => Ok(Objective::UnpreservedInvariant),
            _ => Err(Error::InvalidArgument(format!("unknown objective '{s}'"))),
        }
    }
}

fn unpreserved_law(family: SchemeFamily) -> Result<Law> {
    match family {
        SchemeFamily::EC8 | SchemeFamily::EC10 => Ok(Law::Momentum),
        SchemeFamily::MC8 | SchemeFamily::MC10 => Ok(Law::Energy),
        _ => Err(Error::InvalidArgument(format!("{family} has no parameter to sweep"))),
    }
}

/// Objective value of one run.
pub fn objective_value(
    family: SchemeFamily,
    lambda: f64,
    bench: &Benchmark,
    objective: Objective,
    cfg: &NewtonConfig,
) -> Result<f64> {
    let spec = SchemeSpec::new(family, lambda)?;
    let traj = integrate_benchmark(&spec, bench, bench.n_steps().max(1), cfg)?;
    match objective {
        Objective::SolutionError => solution_error(traj.final_state(), &bench.exact_at(traj.final_time())),
        Objective::UnpreservedInvariant => Ok(invariant_errors(&traj).get(unpreserved_law(family)?)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub lambda_star: f64,
    pub value: f64,
    /// Scanned `(λ, objective)` pairs; `None` marks a failed run.
    pub scan: Vec<(f64, Option<f64>)>,
    /// Every refinement evaluation.
    pub refined: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub range: (f64, f64),
    pub samples: usize,
    /// Stop golden-section refinement once the bracket is narrower than this.
    pub refine_tol: f64,
}

/// Scans `λ` uniformly, then refines the best bracketed scan point by
/// golden-section search. Failed runs are excluded.
pub fn sweep_lambda(
    family: SchemeFamily,
    bench: &Benchmark,
    objective: Objective,
    opts: &SweepOptions,
    cfg: &NewtonConfig,
) -> Result<SweepResult> {
    let (lo, hi) = opts.range;
    if opts.samples < 3 {
        return Err(Error::InvalidArgument(format!("sweep needs at least 3 samples, got {}", opts.samples)));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("invalid sweep range [{lo}, {hi}]")));
    }
    // Also rejects the parameter-free baselines.
    unpreserved_law(family)?;
    let h = (hi - lo) / (opts.samples - 1) as f64;
    let eval = |lambda: f64| objective_value(family, lambda, bench, objective, cfg).ok().filter(|v| v.is_finite());
    let scan: Vec<(f64, Option<f64>)> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let lambda = lo + i as f64 * h;
            (lambda, eval(lambda))
        })
        .collect();

    let (best_i, best_v) = scan
        .iter()
        .enumerate()
        .filter_map(|(i, (_, v))| v.map(|v| (i, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::SweepFailed)?;
    let mut best = (scan[best_i].0, best_v);
    let mut refined = Vec::new();

    let interior = best_i > 0 && best_i + 1 < scan.len();
    if interior && opts.refine_tol > 0.0 {
        let (mut a, mut b) = (scan[best_i - 1].0, scan[best_i + 1].0);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut probe = |x: f64, refined: &mut Vec<(f64, f64)>| -> f64 {
            match eval(x) {
                Some(v) => {
                    refined.push((x, v));
                    if v < best.1 {
                        best = (x, v);
                    }
                    v
                }
                None => f64::INFINITY,
            }
        };
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let mut f1 = probe(x1, &mut refined);
        let mut f2 = probe(x2, &mut refined);
        while b - a > opts.refine_tol {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = probe(x1, &mut refined);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = probe(x2, &mut refined);
            }
        }
    }
    Ok(SweepResult {
        lambda_star: best.0,
        value: best.1,
        scan,
        refined,
    })
}

/// Least-squares slope of `log(sol_err)` against `log(dx)` over refinement
/// levels `(dx, dt)`.
pub fn convergence_order(spec: &SchemeSpec, problem: Problem, levels: &[(f64, f64)], cfg: &NewtonConfig) -> Result<f64> {
    if levels.len() < 2 {
        return Err(Error::InvalidArgument("convergence order needs at least 2 levels".into()));
    }
    let points: Vec<(f64, f64)> = levels
        .par_iter()
        .map(|&(dx, dt)| {
            let bench = Benchmark::with_steps(problem, dx, dt)?;
            let traj = integrate_benchmark(spec, &bench, bench.n_steps().max(1), cfg)?;
            Ok((dx, solution_error(traj.final_state(), &bench.exact_at(traj.final_time()))?))
        })
        .collect::<Result<_>>()?;
    Ok(log_log_slope(&points))
}
