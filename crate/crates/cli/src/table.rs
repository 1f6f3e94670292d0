//! `mkdv table`: assembles the benchmark error tables from stored run reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use mkdv_core::analysis::Problem;
use mkdv_core::{SchemeFamily, SchemeSpec};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{sig17, StoredReport};
use crate::run::{execute_run, REPORT_FILE};

use SchemeFamily::*;

#[derive(Clone, Debug, PartialEq)]
pub struct TableDef {
    pub id: u8,
    pub problem: Problem,
    pub dx: f64,
    pub dt: f64,
    pub rows: Vec<SchemeSpec>,
}

fn specs(rows: &[(SchemeFamily, f64)]) -> Vec<SchemeSpec> {
    rows.iter()
        .map(|&(f, l)| SchemeSpec::new(f, l).expect("table rows are valid"))
        .chain([SchemeSpec::plain(NarrowBox), SchemeSpec::plain(Multisymplectic)])
        .collect()
}

impl TableDef {
    pub fn get(id: u8) -> CliResult<Self> {
        let (problem, dx, dt, rows) = match id {
            1 => (
                Problem::TwoSoliton,
                0.1,
                0.025,
                specs(&[
                    (EC8, 0.0),
                    (EC8, 1.0),
                    (EC8, -0.05),
                    (MC8, 0.0),
                    (MC8, -0.077),
                    (MC8, -0.073),
                    (EC10, 0.0),
                    (EC10, 0.04),
                    (EC10, 0.2),
                    (MC10, 0.0),
                    (MC10, 0.19),
                ]),
            ),
            2 => (
                Problem::TwoSoliton,
                0.2,
                0.05,
                specs(&[
                    (EC8, 0.0),
                    (EC8, 0.97),
                    (EC8, -0.06),
                    (MC8, 0.0),
                    (MC8, -0.079),
                    (MC8, -0.075),
                    (EC10, 0.0),
                    (EC10, 0.05),
                    (EC10, 0.21),
                    (MC10, 0.0),
                    (MC10, 0.19),
                ]),
            ),
            3 => (
                Problem::Breather,
                0.02,
                0.002,
                specs(&[
                    (EC8, 0.0),
                    (EC8, 2.22),
                    (EC8, 0.49),
                    (MC8, 0.0),
                    (MC8, -0.165),
                    (MC8, -0.128),
                    (EC10, 0.0),
                    (EC10, 0.92),
                    (EC10, 0.78),
                    (MC10, 0.0),
                    (MC10, 1.15),
                ]),
            ),
            _ => return Err(CliError::Config(format!("unknown table {id}, expected 1, 2 or 3"))),
        };
        Ok(Self { id, problem, dx, dt, rows })
    }

    pub fn has_phase(&self) -> bool {
        self.problem == Problem::TwoSoliton
    }

    pub fn config(&self, scheme: SchemeSpec, runs_dir: &Path) -> RunConfig {
        let mut cfg = RunConfig::standard(self.problem, scheme);
        cfg.dx = self.dx;
        cfg.dt = self.dt;
        cfg.output_dir = runs_dir.join(format!("table{}", self.id)).join(dir_name(&scheme));
        cfg
    }

    /// Whether a stored report is the run for `row`.
    pub fn matches(&self, row: &SchemeSpec, rep: &StoredReport) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y.abs().max(1.0);
        let (a, b, t) = self.problem.domain();
        rep.problem == self.problem
            && rep.scheme.family == row.family
            && close(rep.scheme.lambda_coeff, row.lambda_coeff)
            && close(rep.dx, self.dx)
            && close(rep.dt, self.dt)
            && close(rep.a, a)
            && close(rep.b, b)
            && close(rep.t_final, t)
    }
}

fn dir_name(s: &SchemeSpec) -> String {
    s.label().replace(['(', ')'], "_").trim_end_matches('_').to_string()
}

/// Row label used in the printed tables.
pub fn method_name(s: &SchemeSpec) -> String {
    match s.family {
        NarrowBox => "Narrow box".to_string(),
        _ => s.label(),
    }
}

/// Every `report.txt` under `dir`, in sorted path order.
pub fn find_reports(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut found = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries = match fs::read_dir(&d) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && d != dir => continue,
            Err(e) => return Err(CliError::io(&d)(e)),
        };
        for entry in entries {
            let path = entry.map_err(CliError::io(&d))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|n| n == REPORT_FILE) {
                found.push(path);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Reports for each table row, in row order. Unreadable reports are skipped.
fn collect(def: &TableDef, runs_dir: &Path) -> CliResult<Vec<Option<StoredReport>>> {
    let reports: Vec<StoredReport> = if runs_dir.exists() {
        find_reports(runs_dir)?
            .iter()
            .filter_map(|p| StoredReport::load(p).ok())
            .collect()
    } else {
        Vec::new()
    };
    Ok(def
        .rows
        .iter()
        .map(|row| reports.iter().find(|r| def.matches(row, r)).cloned())
        .collect())
}

/// Loads the table rows from `runs_dir`. With `compute`, missing rows are run
/// concurrently (into `runs_dir/table<id>/`) first.
pub fn build_table(def: &TableDef, runs_dir: &Path, compute: bool) -> CliResult<Vec<(SchemeSpec, StoredReport)>> {
    let mut found = collect(def, runs_dir)?;
    if compute {
        let missing: Vec<usize> = (0..found.len()).filter(|&i| found[i].is_none()).collect();
        let results: Vec<(usize, CliResult<StoredReport>)> = missing
            .par_iter()
            .map(|&i| (i, execute_run(&def.config(def.rows[i], runs_dir))))
            .collect();
        for (i, r) in results {
            found[i] = Some(r.map_err(|e| match e {
                CliError::Solver { step, message } => CliError::Solver {
                    step,
                    message: format!("{}: {message}", def.rows[i].label()),
                },
                other => other,
            })?);
        }
    }
    let missing: Vec<String> = def
        .rows
        .iter()
        .zip(&found)
        .filter(|(_, r)| r.is_none())
        .map(|(s, _)| method_name(s))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::MissingRuns {
            table: def.id,
            rows: missing,
        });
    }
    Ok(def.rows.iter().copied().zip(found.into_iter().flatten()).collect())
}

fn display_err(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() < 1e-3 {
        format!("{x:.2e}")
    } else {
        format!("{x:.4}")
    }
}

fn display_phase(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.2}"))
}

fn header(def: &TableDef) -> Vec<&'static str> {
    let mut h = vec!["Method", "Err1", "Err2", "Err3", "Sol. Err."];
    if def.has_phase() {
        h.extend(["Errphi1", "Errphi2", "Errphi"]);
    }
    h
}

pub fn markdown(def: &TableDef, rows: &[(SchemeSpec, StoredReport)]) -> String {
    let h = header(def);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Table {}: {} (dx = {}, dt = {})\n",
        def.id, def.problem, def.dx, def.dt
    );
    let _ = writeln!(s, "| {} |", h.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(h.len()));
    for (spec, rep) in rows {
        let r = &rep.report;
        let mut cells = vec![
            method_name(spec),
            display_err(r.err1),
            display_err(r.err2),
            display_err(r.err3),
            display_err(r.sol_err),
        ];
        if def.has_phase() {
            cells.extend([display_phase(r.err_phi1), display_phase(r.err_phi2), display_phase(r.err_phi)]);
        }
        let _ = writeln!(s, "| {} |", cells.join(" | "));
    }
    s
}

pub fn csv(def: &TableDef, rows: &[(SchemeSpec, StoredReport)]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut h = vec!["method", "lambda", "err1", "err2", "err3", "sol_err"];
    if def.has_phase() {
        h.extend(["err_phi1", "err_phi2", "err_phi"]);
    }
    let to_err = |e: csv::Error| CliError::Io {
        path: PathBuf::from("<table csv>"),
        source: e.into(),
    };
    w.write_record(&h).map_err(to_err)?;
    for (spec, rep) in rows {
        let r = &rep.report;
        let mut rec = vec![
            method_name(spec),
            sig17(spec.lambda_coeff),
            sig17(r.err1),
            sig17(r.err2),
            sig17(r.err3),
            sig17(r.sol_err),
        ];
        if def.has_phase() {
            for p in [r.err_phi1, r.err_phi2, r.err_phi] {
                rec.push(p.map_or_else(String::new, sig17));
            }
        }
        w.write_record(&rec).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: PathBuf::from("<table csv>"),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_thirteen_rows() {
        for id in 1..=3 {
            let t = TableDef::get(id).unwrap();
            assert_eq!(t.rows.len(), 13);
            assert_eq!(t.has_phase(), id != 3);
        }
        assert!(TableDef::get(4).is_err());
    }

    #[test]
    fn display_rounding() {
        assert_eq!(display_err(7.00141), "7.0014");
        assert_eq!(display_err(1.74e-13), "1.74e-13");
        assert_eq!(display_err(0.0), "0");
        assert_eq!(display_phase(Some(-0.2650)), "-0.27");
        assert_eq!(display_phase(None), "-");
    }

    #[test]
    fn run_directories_are_distinct() {
        let t = TableDef::get(1).unwrap();
        let mut names: Vec<String> = t.rows.iter().map(dir_name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), t.rows.len());
        assert_eq!(dir_name(&SchemeSpec::new(EC8, -0.05).unwrap()), "EC8_-0.05");
    }

    #[test]
    fn empty_directory_lists_every_row() {
        let dir = std::env::temp_dir().join("mkdv-table-empty-unit");
        let def = TableDef::get(2).unwrap();
        match build_table(&def, &dir, false) {
            Err(CliError::MissingRuns { table, rows }) => {
                assert_eq!(table, 2);
                assert_eq!(rows.len(), 13);
                assert!(rows.contains(&"Narrow box".to_string()));
            }
            other => panic!("expected missing runs, got {other:?}"),
        }
    }
}
