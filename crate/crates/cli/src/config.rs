//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mkdv_core::analysis::{Benchmark, Problem};
use mkdv_core::{NewtonConfig, SchemeFamily, SchemeSpec};

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 12] = [
    "problem",
    "scheme",
    "lambda",
    "a",
    "b",
    "dx",
    "dt",
    "T",
    "newton_tol",
    "newton_max_iters",
    "snapshot_stride",
    "output_dir",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub scheme: SchemeSpec,
    pub a: f64,
    pub b: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_final: f64,
    pub newton: NewtonConfig,
    /// Write a snapshot every this many steps; 0 disables snapshots.
    pub snapshot_stride: usize,
    pub output_dir: PathBuf,
}

/// Splits `key = value` lines, dropping blank lines and `#` comments.
pub fn parse_pairs(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got '{line}'", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key", n + 1)));
        }
        if pairs.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key '{k}'", n + 1)));
        }
    }
    Ok(pairs)
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

impl RunConfig {
    pub fn standard(problem: Problem, scheme: SchemeSpec) -> Self {
        let (a, b, t_final) = problem.domain();
        let (dx, dt) = problem.steps();
        Self {
            problem,
            scheme,
            a,
            b,
            dx,
            dt,
            t_final,
            newton: NewtonConfig::default(),
            snapshot_stride: 0,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let pairs = parse_pairs(text)?;
        if let Some(k) = pairs.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown key '{k}'")));
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);

        let problem: Problem = match get("problem") {
            Some(p) => p.parse()?,
            None => Problem::TwoSoliton,
        };
        let family: SchemeFamily = get("scheme")
            .ok_or_else(|| CliError::Config("missing key 'scheme'".into()))?
            .parse()?;
        let lambda = get("lambda").map(|v| number("lambda", v)).transpose()?.unwrap_or(0.0);
        let mut cfg = Self::standard(problem, SchemeSpec::new(family, lambda)?);

        for (key, slot) in [
            ("a", &mut cfg.a),
            ("b", &mut cfg.b),
            ("dx", &mut cfg.dx),
            ("dt", &mut cfg.dt),
            ("T", &mut cfg.t_final),
            ("newton_tol", &mut cfg.newton.tol_residual),
        ] {
            if let Some(v) = get(key) {
                *slot = number(key, v)?;
            }
        }
        if let Some(v) = get("newton_max_iters") {
            cfg.newton.max_iters = number("newton_max_iters", v)?;
        }
        if let Some(v) = get("snapshot_stride") {
            cfg.snapshot_stride = number("snapshot_stride", v)?;
        }
        if let Some(v) = get("output_dir") {
            cfg.output_dir = PathBuf::from(v);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text)
    }

    pub fn benchmark(&self) -> CliResult<Benchmark> {
        Ok(Benchmark::new(self.problem, self.a, self.b, self.dx, self.dt, self.t_final)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.newton.validate()?;
        self.benchmark()?;
        Ok(())
    }

    /// Serializes back to the config format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem = {}", self.problem);
        let _ = writeln!(s, "scheme = {}", self.scheme.family);
        let _ = writeln!(s, "lambda = {:?}", self.scheme.lambda_coeff);
        for (k, v) in [("a", self.a), ("b", self.b), ("dx", self.dx), ("dt", self.dt), ("T", self.t_final)] {
            let _ = writeln!(s, "{k} = {v:?}");
        }
        let _ = writeln!(s, "newton_tol = {:e}", self.newton.tol_residual);
        let _ = writeln!(s, "newton_max_iters = {}", self.newton.max_iters);
        let _ = writeln!(s, "snapshot_stride = {}", self.snapshot_stride);
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        s
    }
}
