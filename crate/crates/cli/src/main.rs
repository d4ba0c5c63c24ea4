//! `shiftinv` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure or
//! non-convergence, 3 I/O failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use shiftinv::harness::{
    format_sig, paper_preset, run_experiment, run_gap_sweep, ExperimentSpec, MatrixSource, MeasureWindow,
    SweepBase,
};
use shiftinv::rate::{closed_form_rate, iteration_multipliers, optimal_shift};
use shiftinv::{Error, InnerSolver, ShiftStrategy, SolverConfig, SpectrumSummary};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "shiftinv", version, about = "Block shift-inverse eigensolver with a Richardson inner step")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the lowest eigenpairs of a symmetric matrix.
    Solve(SolveArgs),
    /// Print the balancing shift and the gap-dependent contraction rate.
    PredictRate(PredictArgs),
    /// Run the 4x4 diag(1, 2, 2.01, 4) reproduction and write its trace and plot.
    ReproducePaper(ReproduceArgs),
    /// Measure the contraction rate across eigenvalue gaps.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InnerArg {
    Direct,
    Richardson,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["matrix", "diag", "laplacian"])))]
struct SolveArgs {
    /// Matrix Market file (array or coordinate, real symmetric).
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Diagonal matrix with these entries.
    #[arg(long, value_name = "V1,V2,...", value_delimiter = ',', allow_negative_numbers = true)]
    diag: Option<Vec<f64>>,
    /// 1-D Laplacian (tridiagonal -1, 2, -1) of order N.
    #[arg(long, value_name = "N")]
    laplacian: Option<usize>,
    /// Block size: number of eigenpairs carried.
    #[arg(long = "l", value_name = "ELL", default_value_t = 1)]
    ell: usize,
    #[arg(long, value_enum, default_value_t = InnerArg::Richardson)]
    inner: InnerArg,
    /// Richardson relaxation parameter, in (0, 1).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    theta: f64,
    /// Richardson applications per outer iteration.
    #[arg(long, default_value_t = 1)]
    inner_steps: usize,
    /// rayleigh | fixed:VAL | optimal:LAMBDA_L1,LAMBDA_N
    #[arg(long, default_value = "rayleigh", value_parser = parse_shift, allow_hyphen_values = true)]
    shift: ShiftStrategy,
    #[arg(long, default_value_t = 500)]
    max_outer: usize,
    /// Stop when every residual |A x - lambda x| is at most this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the per-iteration trace CSV here.
    #[arg(long, value_name = "OUT.csv")]
    trace: Option<PathBuf>,
    /// Write the eigenvalue-error SVG here (needs --truth).
    #[arg(long, value_name = "OUT.svg")]
    plot: Option<PathBuf>,
    /// Compute the reference spectrum and record eigenbasis diagnostics.
    #[arg(long)]
    truth: bool,
    /// Measurement window START,END for the rate (default: automatic).
    #[arg(long, value_name = "START,END", value_parser = parse_window)]
    window: Option<(usize, usize)>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda_l: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda_l1: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda_n: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Directory for paper_trace.csv and paper_fig1.svg.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Gaps lambda_(l+1) - lambda_l to test.
    #[arg(long, required = true, num_args = 1, value_delimiter = ',', allow_negative_numbers = true)]
    gaps: Vec<f64>,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    lambda_l: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    lambda_n: f64,
    /// Block size; lower desired eigenvalues sit 1 apart below lambda_l.
    #[arg(long = "l", value_name = "ELL", default_value_t = 2)]
    ell: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 1)]
    inner_steps: usize,
    #[arg(long, default_value_t = 500)]
    max_outer: usize,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for sweep.csv and sweep.svg.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn parse_shift(s: &str) -> Result<ShiftStrategy, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    if s == "rayleigh" {
        return Ok(ShiftStrategy::Rayleigh);
    }
    if let Some(v) = s.strip_prefix("fixed:") {
        return Ok(ShiftStrategy::Fixed(num(v)?));
    }
    if let Some(v) = s.strip_prefix("optimal:") {
        let (a, b) = v
            .split_once(',')
            .ok_or_else(|| "expected optimal:LAMBDA_L1,LAMBDA_N".to_string())?;
        return Ok(ShiftStrategy::OptimalRate {
            lambda_ell_plus_1: num(a)?,
            lambda_n: num(b)?,
        });
    }
    Err(format!("expected rayleigh, fixed:VAL or optimal:L1,LN, got {s:?}"))
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| "expected START,END".to_string())?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad index {t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn shift_flag(shift: &ShiftStrategy) -> String {
    match shift {
        ShiftStrategy::Rayleigh => "rayleigh".into(),
        ShiftStrategy::Fixed(t) => format!("fixed:{t}"),
        ShiftStrategy::OptimalRate {
            lambda_ell_plus_1,
            lambda_n,
        } => format!("optimal:{lambda_ell_plus_1},{lambda_n}"),
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Flag-form echo of a fully resolved solver run.
fn describe_solve(source: &MatrixSource, config: &SolverConfig, truth: bool) -> String {
    let mut s = String::from("resolved:");
    match source {
        MatrixSource::File(p) => write!(s, " --matrix {}", p.display()),
        MatrixSource::Diagonal(d) => write!(s, " --diag {}", join(d)),
        MatrixSource::Laplacian1d(n) => write!(s, " --laplacian {n}"),
    }
    .ok();
    let inner = match config.inner {
        InnerSolver::Direct => "direct",
        InnerSolver::Richardson => "richardson",
    };
    write!(
        s,
        " --l {} --inner {inner} --theta {} --inner-steps {} --shift {} --max-outer {} --tol {:e} --seed {}",
        config.ell,
        config.theta,
        config.inner_steps,
        shift_flag(&config.shift),
        config.max_outer,
        config.tol,
        config.seed
    )
    .ok();
    if truth {
        s.push_str(" --truth");
    }
    s
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_io() {
        EXIT_IO
    } else if err.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    })
}

fn ensure_dir(dir: &Path) -> Result<(), ExitCode> {
    std::fs::create_dir_all(dir).map_err(|e| {
        eprintln!("error: {}: {e}", dir.display());
        ExitCode::from(EXIT_IO)
    })
}

fn cmd_solve(args: SolveArgs) -> ExitCode {
    let source = match (args.matrix, args.diag, args.laplacian) {
        (Some(p), _, _) => MatrixSource::File(p),
        (_, Some(d), _) => MatrixSource::Diagonal(d),
        (_, _, Some(n)) => MatrixSource::Laplacian1d(n),
        _ => unreachable!("clap enforces the source group"),
    };
    let config = SolverConfig {
        ell: args.ell,
        inner: match args.inner {
            InnerArg::Direct => InnerSolver::Direct,
            InnerArg::Richardson => InnerSolver::Richardson,
        },
        theta: args.theta,
        inner_steps: args.inner_steps,
        shift: args.shift,
        max_outer: args.max_outer,
        tol: args.tol,
        seed: args.seed,
    };
    println!("{}", describe_solve(&source, &config, args.truth));
    if let Err(e) = config.validate() {
        return fail(&e);
    }
    let spec = ExperimentSpec {
        source,
        config,
        compute_truth: args.truth,
        trace_csv: args.trace,
        plot_svg: args.plot,
        plot_columns: None,
        window: match args.window {
            Some((start, end)) => MeasureWindow::Fixed { start, end },
            None => MeasureWindow::Auto,
        },
    };
    let outcome = match run_experiment(&spec) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    print!("{outcome}");
    for (i, x) in outcome.report.final_block.columns.iter().enumerate() {
        let parts: Vec<String> = x.as_slice().iter().map(|v| format_sig(*v)).collect();
        println!("x_{} = [{}]", i + 1, parts.join(", "));
    }
    if outcome.report.converged {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "did not converge to tol {:e} within {} outer iterations",
            spec.config.tol, spec.config.max_outer
        );
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn cmd_predict_rate(args: PredictArgs) -> ExitCode {
    println!(
        "resolved: --lambda-l {} --lambda-l1 {} --lambda-n {} --theta {}",
        args.lambda_l, args.lambda_l1, args.lambda_n, args.theta
    );
    let run = || -> shiftinv::Result<()> {
        let summary = SpectrumSummary::new(args.lambda_l, args.lambda_l1, args.lambda_n)?;
        let tau = optimal_shift(&summary, args.theta)?;
        let rate = closed_form_rate(&summary)?;
        let g = iteration_multipliers(&[args.lambda_l, args.lambda_l1, args.lambda_n], args.theta, tau);
        println!("tau = {}", format_sig(tau));
        println!("rate = {}", format_sig(rate));
        println!(
            "multipliers g(lambda_l) = {}, g(lambda_l1) = {}, g(lambda_n) = {}",
            format_sig(g[0]),
            format_sig(g[1]),
            format_sig(g[2])
        );
        Ok(())
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn cmd_reproduce_paper(args: ReproduceArgs) -> ExitCode {
    if let Err(code) = ensure_dir(&args.out_dir) {
        return code;
    }
    let spec = paper_preset(Some(&args.out_dir));
    println!("{}", describe_solve(&spec.source, &spec.config, spec.compute_truth));
    let outcome = match run_experiment(&spec) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    print!("{outcome}");
    for path in [&spec.trace_csv, &spec.plot_svg].into_iter().flatten() {
        println!("wrote {}", path.display());
    }
    ExitCode::SUCCESS
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    let config = SolverConfig {
        ell: args.ell,
        inner: InnerSolver::Richardson,
        theta: args.theta,
        inner_steps: args.inner_steps,
        shift: ShiftStrategy::Rayleigh,
        max_outer: args.max_outer,
        tol: args.tol,
        seed: args.seed,
    };
    println!(
        "resolved: --gaps {} --lambda-l {} --lambda-n {} --l {} --theta {} --inner-steps {} --max-outer {} --tol {:e} --seed {} --out-dir {}",
        join(&args.gaps),
        args.lambda_l,
        args.lambda_n,
        args.ell,
        args.theta,
        args.inner_steps,
        args.max_outer,
        args.tol,
        args.seed,
        args.out_dir.display()
    );
    if let Err(e) = config.validate() {
        return fail(&e);
    }
    if let Some(g) = args.gaps.iter().find(|g| g.is_nan() || **g <= 0.0) {
        eprintln!("error: gaps must be positive, got {g}");
        return ExitCode::from(EXIT_USAGE);
    }
    if let Err(code) = ensure_dir(&args.out_dir) {
        return code;
    }
    let base = SweepBase::evenly_spaced(args.ell, args.lambda_l, args.lambda_n);
    let csv = args.out_dir.join("sweep.csv");
    let svg = args.out_dir.join("sweep.svg");
    match run_gap_sweep(&args.gaps, &base, &config, Some(&csv), Some(&svg)) {
        Ok(rows) => {
            println!("gap predicted_rate measured_rate");
            for r in rows {
                let measured = r.measured_rate.map_or("n/a".to_string(), format_sig);
                println!("{} {} {}", format_sig(r.gap), format_sig(r.predicted_rate), measured);
            }
            println!("wrote {}", csv.display());
            println!("wrote {}", svg.display());
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::PredictRate(a) => cmd_predict_rate(a),
        Command::ReproducePaper(a) => cmd_reproduce_paper(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}
