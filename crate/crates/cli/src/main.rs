use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mkdv_cli::error::CliError;
use mkdv_cli::sweep::{execute_sweep, summary, write_csv, SweepRequest};
use mkdv_cli::table::{build_table, csv, markdown, TableDef};
use mkdv_cli::{run, verify, CliResult, RunConfig};
use mkdv_core::analysis::{Objective, Problem};
use mkdv_core::{NewtonConfig, SchemeFamily};

/// Conservative finite difference schemes for the mKdV equation.
#[derive(Parser, Debug)]
#[command(name = "mkdv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration file (key = value).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one benchmark and write its report and CSV artefacts.
    Run,
    /// Assemble an error table (1, 2 or 3) from stored run reports.
    Table(TableArgs),
    /// Scan and refine the free parameter of a scheme family.
    Sweep(SweepArgs),
    /// Check discrete divergence identities, Jacobians and truncation orders.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Table id.
    id: u8,
    /// Directory searched recursively for run reports.
    #[arg(long, default_value = "runs")]
    runs: PathBuf,
    /// Run any missing rows (concurrently) before building the table.
    #[arg(long)]
    compute: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    family: SchemeFamily,
    #[arg(long, default_value = "two_soliton")]
    problem: Problem,
    #[arg(long, default_value = "solution_error")]
    objective: Objective,
    /// Lower and upper end of the λ range.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
    range: Vec<f64>,
    #[arg(long, default_value_t = 11)]
    samples: usize,
    #[arg(long)]
    dx: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Width at which golden-section refinement stops.
    #[arg(long)]
    refine_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Random trials per identity check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

fn write_file(path: PathBuf, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(CliError::io(parent))?;
    }
    fs::write(&path, text).map_err(CliError::io(path))
}

fn cmd_run(cli: &Cli) -> CliResult<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("run needs --config <path>".into()))?;
    let mut cfg = RunConfig::load(path).map_err(|e| match e {
        CliError::Io { path, source } => CliError::Config(format!("{}: {source}", path.display())),
        other => other,
    })?;
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    let rep = run::execute_run(&cfg)?;
    let r = &rep.report;
    println!(
        "{} {}: sol_err {:.6e}, err1 {:.3e}, err2 {:.3e}, err3 {:.3e} ({:.2} s)",
        rep.problem,
        rep.scheme.label(),
        r.sol_err,
        r.err1,
        r.err2,
        r.err3,
        rep.wall_time_s
    );
    println!("wrote {}", cfg.output_dir.display());
    Ok(())
}

fn cmd_table(cli: &Cli, args: &TableArgs) -> CliResult<()> {
    let def = TableDef::get(args.id)?;
    let rows = build_table(&def, &args.runs, args.compute)?;
    let md = markdown(&def, &rows);
    print!("{md}");
    if let Some(out) = &cli.out {
        write_file(out.join(format!("table{}.md", def.id)), &md)?;
        write_file(out.join(format!("table{}.csv", def.id)), &csv(&def, &rows)?)?;
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let req = SweepRequest {
        family: args.family,
        problem: args.problem,
        objective: args.objective,
        range: (args.range[0], args.range[1]),
        samples: args.samples,
        dx: args.dx,
        dt: args.dt,
        refine_tol: args.refine_tol,
    };
    req.validate()?;
    let res = execute_sweep(&req, &NewtonConfig::default())?;
    print!("{}", summary(&req, &res));
    if let Some(out) = &cli.out {
        fs::create_dir_all(out).map_err(CliError::io(out))?;
        write_csv(&out.join("sweep.csv"), &res)?;
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let checks = verify::run_checks(args.trials, cli.seed)?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("[{}] {}\n", if c.passed { "PASS" } else { "FAIL" }, c.line));
    }
    print!("{text}");
    if let Some(out) = &cli.out {
        write_file(out.join("verify.txt"), &text)?;
    }
    match checks.iter().filter(|c| !c.passed).count() {
        0 => Ok(()),
        n => Err(CliError::ChecksFailed(n)),
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Run => cmd_run(cli),
        Command::Table(a) => cmd_table(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { mkdv_cli::error::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mkdv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
