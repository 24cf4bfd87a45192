use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ppbnb::io::{
    emit_plot_data, export_oracle, export_results, parse_config, parse_param, verify_run, ConfigOverrides,
};
use ppbnb::oracle::{build_grid_oracle, default_resolution};
use ppbnb::problems::list_problems;
use ppbnb::solver::{solve_with, IterationView};
use ppbnb::{Error, TerminationReason};

const EXIT_OTHER: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_MAX_ITERATIONS: u8 = 4;

#[derive(Parser)]
#[command(name = "ppbnb", version, about = "Branch and bound for properly Pareto optimal solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver and write results to --out.
    Solve(SolveArgs),
    /// Show the built-in problems and their default tolerances.
    ListProblems,
    /// Evaluate a dense grid and export its Pareto and eps-proper fronts.
    Oracle(OracleArgs),
    /// Re-check a finished run directory against a grid oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in or registered problem name.
    #[arg(long)]
    problem: Option<String>,
    /// Problem parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// JSON problem file with expression objectives and constraints.
    #[arg(long, value_name = "FILE")]
    problem_file: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// JSON run configuration; flags override its fields
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Cone parameter in [0, 1); 0 recovers the whole Pareto front.
    #[arg(long, allow_negative_numbers = true)]
    proper_eps: Option<f64>,
    /// Gap tolerance in normalized objective units.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Box-diameter tolerance in decision units.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Upper bounds from box midpoints or a small evolutionary run per box
    #[arg(long, value_name = "midpoint|moea")]
    ub_mode: Option<String>,
    /// Worker threads (results do not depend on it)
    #[arg(long, env = "PPBNB_THREADS")]
    threads: Option<usize>,
    /// Seed for reference sampling and the per-box evolutionary runs
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration limit (default 100)
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output directory (default `out`)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Build a grid oracle and include its front in the plot data.
    #[arg(long)]
    oracle: bool,
    /// Grid points per dimension (default depends on n)
    #[arg(long)]
    oracle_resolution: Option<usize>,
    /// Print one line per iteration and dump every iteration's boxes.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Grid points per dimension (default depends on n)
    #[arg(long)]
    oracle_resolution: Option<usize>,
    /// Cone parameters to export eps-proper fronts for, repeatable.
    #[arg(long, default_values_t = [0.75])]
    proper_eps: Vec<f64>,
    #[arg(long, value_name = "DIR", default_value = "oracle")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory written by `solve`.
    #[arg(value_name = "DIR")]
    run: PathBuf,
    /// Grid points per dimension (default depends on n)
    #[arg(long)]
    oracle_resolution: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidEps(_)
        | Error::InvalidConfig(_)
        | Error::UnknownProblem(_)
        | Error::InvalidParameter { .. }
        | Error::Expression { .. }
        | Error::Parse(_)
        | Error::Json(_)
        | Error::OracleTooLarge(_) => EXIT_VALIDATION,
        _ => EXIT_OTHER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::ListProblems => {
            run_list();
            Ok(0)
        }
        Command::Oracle(args) => run_oracle(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn overrides(p: ProblemArgs) -> ConfigOverrides {
    ConfigOverrides {
        problem: p.problem,
        params: p.params,
        problem_file: p.problem_file,
        ..Default::default()
    }
}

fn run_solve(a: SolveArgs) -> ppbnb::Result<u8> {
    let o = ConfigOverrides {
        proper_eps: a.proper_eps,
        tol: a.tol,
        delta: a.delta,
        ub_mode: a.ub_mode,
        threads: a.threads,
        seed: a.seed,
        max_iters: a.max_iters,
        out: a.out,
        oracle: a.oracle.then_some(true),
        oracle_resolution: a.oracle_resolution,
        verbose: a.verbose.then_some(true),
        ..overrides(a.problem)
    };
    let cfg = parse_config(a.config.as_deref(), &o)?;
    let prob = cfg.load_problem()?;
    let dump_dir = cfg.out_dir.join("iterations");
    if cfg.verbose {
        std::fs::create_dir_all(&dump_dir).map_err(|e| Error::Io {
            path: dump_dir.clone(),
            source: e,
        })?;
    }
    let mut dump_err = None;
    let result = solve_with(&prob, &cfg.solver, |v| {
        if cfg.verbose {
            eprintln!(
                "iter {:>3}  live {:>8}  discarded {:>8}  infeasible {:>7}  |U| {:>6}  |L| {:>6}  w {:.3e}  d {:.3e}",
                v.iteration,
                v.live.len(),
                v.discarded.len(),
                v.infeasible.len(),
                v.upper_archive.len(),
                v.lower_archive.len(),
                v.w,
                v.d
            );
            if dump_err.is_none() {
                dump_err = dump_iteration(&dump_dir, v).err();
            }
        }
    })?;
    if let Some(e) = dump_err {
        return Err(e);
    }

    export_results(&cfg.out_dir, &cfg, &prob, &result)?;
    let oracle = if cfg.oracle {
        let res = cfg.oracle_resolution.unwrap_or_else(|| default_resolution(prob.dim()));
        Some(build_grid_oracle(&prob, res)?)
    } else {
        None
    };
    if cfg.export.plot {
        emit_plot_data(&cfg.out_dir, &result, oracle.as_ref())?;
    }

    let s = &result.state;
    println!(
        "{}: {} after {} iterations, {} solutions, {} live boxes, d = {:.4e}, w = {:.4e}, margin = {:.4e}",
        prob.name(),
        result.reason,
        s.iteration,
        s.upper_archive.len(),
        s.boxes.len(),
        s.d,
        s.w,
        s.efficiency_margin()
    );
    println!("results in {}", cfg.out_dir.display());
    Ok(match result.reason {
        TerminationReason::Converged => 0,
        TerminationReason::Degenerate => EXIT_DEGENERATE,
        TerminationReason::MaxIterations => EXIT_MAX_ITERATIONS,
    })
}

fn dump_iteration(dir: &Path, v: &IterationView<'_>) -> ppbnb::Result<()> {
    let path = dir.join(format!("iter_{:04}.csv", v.iteration));
    let wrap = |e: csv::Error| Error::Parse(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(&path).map_err(wrap)?;
    w.write_record(["id", "lower", "upper", "lb", "upper_bounds", "protected", "fate"])
        .map_err(wrap)?;
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
    for b in v.infeasible {
        w.write_record([
            b.id().to_string(),
            join(b.lower()),
            join(b.upper()),
            String::new(),
            String::new(),
            "false".into(),
            "infeasible".into(),
        ])
        .map_err(wrap)?;
    }
    let live: std::collections::HashSet<u64> = v.live.iter().map(|b| b.id()).collect();
    let boxes: std::collections::HashMap<u64, _> =
        v.live.iter().chain(v.discarded).map(|b| (b.id(), b)).collect();
    for r in v.records {
        let b = boxes[&r.box_id];
        let ubs = r
            .upper_candidates
            .iter()
            .map(|c| join(&c.normalized))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.box_id.to_string(),
            join(b.lower()),
            join(b.upper()),
            join(&r.lower),
            ubs,
            r.protected.to_string(),
            if live.contains(&r.box_id) { "live" } else { "discarded" }.into(),
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::Io { path, source: e })
}

fn run_list() {
    println!("{:<16} {:>2} {:>2} {:>2}  {:>8} {:>8}  params", "name", "n", "m", "p", "tol", "delta");
    for (name, info) in list_problems() {
        match info {
            Some(i) => {
                let params = i
                    .default_params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                println!(
                    "{:<16} {:>2} {:>2} {:>2}  {:>8} {:>8}  {}",
                    i.name, i.n, i.m, i.p, i.default_tolerances.0, i.default_tolerances.1, params
                );
                println!("    {}", i.summary);
            }
            None => println!("{name:<16} (user)"),
        }
    }
}

fn run_oracle(a: OracleArgs) -> ppbnb::Result<u8> {
    for &e in &a.proper_eps {
        ppbnb::ConeEps::new(e)?;
    }
    let cfg = parse_config(None, &overrides(a.problem))?;
    let prob = cfg.load_problem()?;
    let res = a.oracle_resolution.unwrap_or_else(|| default_resolution(prob.dim()));
    let oracle = build_grid_oracle(&prob, res)?;
    let files = export_oracle(&a.out, &prob, &oracle, &a.proper_eps)?;
    println!(
        "{}: {} grid points, {} feasible, {} nondominated",
        prob.name(),
        oracle.evaluated(),
        oracle.points().len(),
        oracle.front_indices().len()
    );
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(0)
}

fn run_verify(a: VerifyArgs) -> ppbnb::Result<u8> {
    let report = verify_run(&a.run, a.oracle_resolution)?;
    for c in &report.checks {
        println!("{c}");
    }
    Ok(if report.passed() { 0 } else { EXIT_OTHER })
}
