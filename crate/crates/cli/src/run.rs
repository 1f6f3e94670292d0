//! `mkdv run`: one benchmark integration and its artefacts.

use std::fs;
use std::path::Path;
use std::time::Instant;

use mkdv_core::analysis::{evaluate, integrate_benchmark};
use mkdv_core::Trajectory;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{sig17, NewtonStats, StoredReport};

pub const REPORT_FILE: &str = "report.txt";
pub const INVARIANTS_FILE: &str = "invariants.csv";
pub const FINAL_FILE: &str = "final.csv";
pub const SNAPSHOT_DIR: &str = "snapshots";

fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(CliError::io(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

fn newton_stats(traj: &Trajectory) -> NewtonStats {
    NewtonStats {
        total: traj.newton_iters.iter().sum(),
        mean: traj.mean_newton_iters(),
        max: traj.max_newton_iters(),
        max_residual: traj.residuals.iter().copied().fold(0.0, f64::max),
    }
}

/// Integrates the configured benchmark, writes every artefact to
/// `cfg.output_dir` and returns the report.
pub fn execute_run(cfg: &RunConfig) -> CliResult<StoredReport> {
    let bench = cfg.benchmark()?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;

    let n = bench.n_steps();
    let stride = if cfg.snapshot_stride == 0 { n.max(1) } else { cfg.snapshot_stride };
    let started = Instant::now();
    let traj = integrate_benchmark(&cfg.scheme, &bench, stride, &cfg.newton)?;
    let report = evaluate(&bench, &traj)?;
    let wall_time_s = started.elapsed().as_secs_f64();

    let grid = &bench.grid;
    let dt = grid.dt();

    write_rows(
        &dir.join(INVARIANTS_FILE),
        &["step", "t", "mass_sum", "momentum_sum", "energy_sum", "newton_iters"],
        traj.invariants.iter().enumerate().map(|(k, inv)| {
            let iters = if k == 0 { 0 } else { traj.newton_iters[k - 1] };
            vec![
                k.to_string(),
                sig17(k as f64 * dt),
                sig17(inv.sums[0]),
                sig17(inv.sums[1]),
                sig17(inv.sums[2]),
                iters.to_string(),
            ]
        }),
    )?;

    if cfg.snapshot_stride > 0 {
        let snap_dir = dir.join(SNAPSHOT_DIR);
        fs::create_dir_all(&snap_dir).map_err(CliError::io(&snap_dir))?;
        for (k, u) in &traj.states {
            write_rows(
                &snap_dir.join(format!("u_{k:06}.csv")),
                &["x", "u"],
                grid.nodes().zip(u.iter()).map(|(x, v)| vec![sig17(x), sig17(*v)]),
            )?;
        }
    }

    let exact = bench.exact_at(traj.final_time());
    write_rows(
        &dir.join(FINAL_FILE),
        &["x", "u", "exact"],
        grid.nodes()
            .zip(traj.final_state().iter().zip(exact.iter()))
            .map(|(x, (u, e))| vec![sig17(x), sig17(*u), sig17(*e)]),
    )?;

    let stored = StoredReport {
        problem: cfg.problem,
        scheme: cfg.scheme,
        a: cfg.a,
        b: cfg.b,
        dx: grid.dx(),
        dt,
        t_final: cfg.t_final,
        steps: n,
        report,
        wall_time_s,
        newton: newton_stats(&traj),
    };
    let path = dir.join(REPORT_FILE);
    fs::write(&path, stored.to_text()).map_err(CliError::io(&path))?;
    Ok(stored)
}
