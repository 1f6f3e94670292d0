//! `mkdv sweep`: minimize an objective over the free parameter λ.

use std::fmt::Write as _;
use std::path::Path;

use mkdv_core::analysis::{sweep_lambda, Benchmark, Objective, Problem, SweepOptions, SweepResult};
use mkdv_core::{NewtonConfig, SchemeFamily};

use crate::error::{CliError, CliResult};
use crate::report::sig17;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRequest {
    pub family: SchemeFamily,
    pub problem: Problem,
    pub objective: Objective,
    pub range: (f64, f64),
    pub samples: usize,
    pub dx: Option<f64>,
    pub dt: Option<f64>,
    /// Defaults to a twentieth of the scan spacing.
    pub refine_tol: Option<f64>,
}

impl SweepRequest {
    pub fn validate(&self) -> CliResult<()> {
        if self.samples < 3 {
            return Err(CliError::Config(format!("sweep needs at least 3 samples, got {}", self.samples)));
        }
        let (lo, hi) = self.range;
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(CliError::Config(format!("invalid range [{lo}, {hi}]")));
        }
        if !self.family.is_parametrized() {
            return Err(CliError::Config(format!("{} has no parameter to sweep", self.family)));
        }
        Ok(())
    }

    fn benchmark(&self) -> CliResult<Benchmark> {
        let (dx, dt) = self.problem.steps();
        Ok(Benchmark::with_steps(self.problem, self.dx.unwrap_or(dx), self.dt.unwrap_or(dt))?)
    }
}

pub fn execute_sweep(req: &SweepRequest, newton: &NewtonConfig) -> CliResult<SweepResult> {
    req.validate()?;
    let bench = req.benchmark()?;
    let spacing = (req.range.1 - req.range.0) / (req.samples - 1) as f64;
    let opts = SweepOptions {
        range: req.range,
        samples: req.samples,
        refine_tol: req.refine_tol.unwrap_or(spacing / 20.0),
    };
    match sweep_lambda(req.family, &bench, req.objective, &opts, newton) {
        Err(mkdv_core::Error::SweepFailed) => Err(CliError::Solver {
            step: 0,
            message: "every run in the sweep failed".into(),
        }),
        r => Ok(r?),
    }
}

pub fn summary(req: &SweepRequest, res: &SweepResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} on {}, objective {:?}", req.family, req.problem, req.objective);
    for (l, v) in &res.scan {
        let v = v.map_or_else(|| "failed".to_string(), |v| format!("{v:.6e}"));
        let _ = writeln!(s, "  lambda = {l:>10.5}  {v}");
    }
    let _ = writeln!(s, "lambda* = {:.6}  value = {:.6e}", res.lambda_star, res.value);
    s
}

/// `phase,lambda,value` rows; failed scan points have an empty value.
pub fn write_csv(path: &Path, res: &SweepResult) -> CliResult<()> {
    let io = |e: csv::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["phase", "lambda", "value"]).map_err(io)?;
    for (l, v) in &res.scan {
        w.write_record(["scan".to_string(), sig17(*l), v.map_or_else(String::new, sig17)])
            .map_err(io)?;
    }
    for (l, v) in &res.refined {
        w.write_record(["refine".to_string(), sig17(*l), sig17(*v)]).map_err(io)?;
    }
    w.write_record(["best".to_string(), sig17(res.lambda_star), sig17(res.value)])
        .map_err(io)?;
    w.flush().map_err(CliError::io(path))
}
