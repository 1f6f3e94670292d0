//! `report.txt` serialization. The format is the same flat `key = value`
//! text as the run config, so reports can be read back by `mkdv table`.

use std::fmt::Write as _;
use std::path::Path;

use mkdv_core::analysis::{ErrorReport, Problem};
use mkdv_core::{Law, SchemeFamily, SchemeSpec};

use crate::config::parse_pairs;
use crate::error::{CliError, CliResult};

/// Formats with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt17(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), sig17)
}

fn laws(l: &[Law]) -> String {
    l.iter().map(|l| l.index().to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NewtonStats {
    pub total: usize,
    pub mean: f64,
    pub max: usize,
    pub max_residual: f64,
}

/// A run report as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct StoredReport {
    pub problem: Problem,
    pub scheme: SchemeSpec,
    pub a: f64,
    pub b: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_final: f64,
    pub steps: usize,
    pub report: ErrorReport,
    pub wall_time_s: f64,
    pub newton: NewtonStats,
}

impl StoredReport {
    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("problem", self.problem.to_string());
        put("scheme", self.scheme.family.to_string());
        put("lambda", sig17(self.scheme.lambda_coeff));
        put("a", sig17(self.a));
        put("b", sig17(self.b));
        put("dx", sig17(self.dx));
        put("dt", sig17(self.dt));
        put("T", sig17(self.t_final));
        put("steps", self.steps.to_string());
        put("sol_err", sig17(r.sol_err));
        put("err1", sig17(r.err1));
        put("err2", sig17(r.err2));
        put("err3", sig17(r.err3));
        put("err_phi1", opt17(r.err_phi1));
        put("err_phi2", opt17(r.err_phi2));
        put("err_phi", opt17(r.err_phi));
        put("preserved_laws", laws(&r.preserved_laws));
        put("fallback_used", laws(&r.fallback_used));
        put("wall_time_s", sig17(self.wall_time_s));
        put("newton_iters_total", self.newton.total.to_string());
        put("newton_iters_mean", sig17(self.newton.mean));
        put("newton_iters_max", self.newton.max.to_string());
        put("newton_residual_max", sig17(self.newton.max_residual));
        s
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let pairs = parse_pairs(text)?;
        let get = |k: &str| {
            pairs
                .get(k)
                .map(String::as_str)
                .ok_or_else(|| CliError::Config(format!("report is missing '{k}'")))
        };
        let num = |k: &str| -> CliResult<f64> {
            let v = get(k)?;
            v.parse().map_err(|_| CliError::Config(format!("report field {k}: cannot parse '{v}'")))
        };
        let int = |k: &str| -> CliResult<usize> {
            let v = get(k)?;
            v.parse().map_err(|_| CliError::Config(format!("report field {k}: cannot parse '{v}'")))
        };
        let opt = |k: &str| -> CliResult<Option<f64>> {
            match get(k)? {
                "none" => Ok(None),
                _ => num(k).map(Some),
            }
        };
        let law_list = |k: &str| -> CliResult<Vec<Law>> {
            get(k)?
                .split_whitespace()
                .map(|t| {
                    let i: u8 = t
                        .parse()
                        .map_err(|_| CliError::Config(format!("report field {k}: bad law '{t}'")))?;
                    Ok(Law::from_index(i)?)
                })
                .collect()
        };
        let family: SchemeFamily = get("scheme")?.parse()?;
        Ok(Self {
            problem: get("problem")?.parse()?,
            scheme: SchemeSpec::new(family, num("lambda")?)?,
            a: num("a")?,
            b: num("b")?,
            dx: num("dx")?,
            dt: num("dt")?,
            t_final: num("T")?,
            steps: int("steps")?,
            report: ErrorReport {
                sol_err: num("sol_err")?,
                err1: num("err1")?,
                err2: num("err2")?,
                err3: num("err3")?,
                err_phi1: opt("err_phi1")?,
                err_phi2: opt("err_phi2")?,
                err_phi: opt("err_phi")?,
                preserved_laws: law_list("preserved_laws")?,
                fallback_used: law_list("fallback_used")?,
            },
            wall_time_s: num("wall_time_s")?,
            newton: NewtonStats {
                total: int("newton_iters_total")?,
                mean: num("newton_iters_mean")?,
                max: int("newton_iters_max")?,
                max_residual: num("newton_residual_max")?,
            },
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for x in [0.1, 1.0 / 3.0, -7.001_4, 1e-300, 0.0, 566.37] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn report_round_trip() {
        let rep = StoredReport {
            problem: Problem::TwoSoliton,
            scheme: SchemeSpec::new(SchemeFamily::EC10, 0.04).unwrap(),
            a: -20.0,
            b: 20.0,
            dx: 0.1,
            dt: 0.025,
            t_final: 10.0,
            steps: 400,
            report: ErrorReport {
                sol_err: 0.003,
                err1: 1e-14,
                err2: 0.0114,
                err3: 2e-14,
                err_phi1: Some(-0.0016),
                err_phi2: Some(0.008),
                err_phi: Some(-0.0096),
                preserved_laws: vec![Law::Mass, Law::Energy],
                fallback_used: vec![Law::Momentum],
            },
            wall_time_s: 1.25,
            newton: NewtonStats {
                total: 1200,
                mean: 3.0,
                max: 4,
                max_residual: 3e-13,
            },
        };
        assert_eq!(StoredReport::parse(&rep.to_text()).unwrap(), rep);

        let breather = StoredReport {
            problem: Problem::Breather,
            report: ErrorReport {
                err_phi1: None,
                err_phi2: None,
                err_phi: None,
                fallback_used: vec![],
                ..rep.report.clone()
            },
            ..rep
        };
        assert_eq!(StoredReport::parse(&breather.to_text()).unwrap(), breather);
    }
}
