use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::svg::{LineChart, Series};
use crate::harness::trace::{to_csv_string, trace_to_csv, write_atomically, TraceRecord};
use crate::harness::{format_sig, gen_diag, gen_laplacian_1d};
use crate::linalg::{jacobi_eigensolve, mmio, DenseSymMatrix, EigenDecomposition};
use crate::rate::{auto_window, closed_form_rate, measured_rate, predicted_rate, SpectrumSummary};
use crate::solver::{solve, InnerSolver, ShiftStrategy, SolveReport, SolverConfig};

/// Component ratios below this are treated as rounding noise when choosing a
/// measurement window automatically.
pub const AUTO_WINDOW_FLOOR: f64 = 1e-9;

pub const PAPER_SPECTRUM: [f64; 4] = [1.0, 2.0, 2.01, 4.0];
pub const PAPER_TRACE_FILE: &str = "paper_trace.csv";
pub const PAPER_PLOT_FILE: &str = "paper_fig1.svg";

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    File(PathBuf),
    Diagonal(Vec<f64>),
    Laplacian1d(usize),
}

impl MatrixSource {
    pub fn build(&self) -> Result<DenseSymMatrix> {
        match self {
            MatrixSource::File(path) => mmio::read_matrix_market(path),
            MatrixSource::Diagonal(d) => gen_diag(d),
            MatrixSource::Laplacian1d(n) => gen_laplacian_1d(*n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureWindow {
    Fixed { start: usize, end: usize },
    /// See [`auto_window`].
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub source: MatrixSource,
    pub config: SolverConfig,
    /// Compute the reference eigendecomposition with the Jacobi solver.
    pub compute_truth: bool,
    pub trace_csv: Option<PathBuf>,
    pub plot_svg: Option<PathBuf>,
    /// 1-based block columns to plot; `None` plots all of them.
    pub plot_columns: Option<Vec<usize>>,
    pub window: MeasureWindow,
}

impl ExperimentSpec {
    pub fn new(source: MatrixSource, config: SolverConfig) -> Self {
        ExperimentSpec {
            source,
            config,
            compute_truth: true,
            trace_csv: None,
            plot_svg: None,
            plot_columns: None,
            window: MeasureWindow::Auto,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: SolveReport,
    pub truth: Option<EigenDecomposition>,
    pub records: Vec<TraceRecord>,
    /// Multiplier-quotient rate at the final shift (Richardson runs only).
    pub predicted_rate: Option<f64>,
    /// Gap formula rate for the true spectrum.
    pub closed_form_rate: Option<f64>,
    /// Measured contraction of block column `ell`, with the window used.
    pub measured_rate: Option<(f64, (usize, usize))>,
}

impl ExperimentOutcome {
    pub fn final_shift(&self) -> Option<f64> {
        self.report.final_block.shift
    }
}

impl fmt::Display for ExperimentOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = &self.report.final_block;
        let ell = block.ell();
        writeln!(
            f,
            "outer iterations: {} (converged: {})",
            self.report.outer_iterations_used, self.report.converged
        )?;
        if let Some(tau) = self.final_shift() {
            writeln!(f, "tau = {}", format_sig(tau))?;
        }
        for (i, (lambda, r)) in block
            .ritz_values
            .iter()
            .zip(self.report.residuals.last().into_iter().flatten())
            .enumerate()
        {
            write!(f, "lambda_{} = {}  residual {:.3e}", i + 1, format_sig(*lambda), r)?;
            if let Some(t) = &self.truth {
                write!(f, "  abs error {:.3e}", (lambda - t.eigenvalues[i]).abs())?;
            }
            writeln!(f)?;
        }
        match self.predicted_rate {
            Some(p) => writeln!(f, "predicted rate = {}", format_sig(p))?,
            None => writeln!(f, "predicted rate = n/a")?,
        }
        if let Some(c) = self.closed_form_rate {
            writeln!(f, "closed-form gap rate = {}", format_sig(c))?;
        }
        match self.measured_rate {
            Some((m, (s, e))) => writeln!(
                f,
                "measured rate = {} (block column {ell}, window [{s}, {e}])",
                format_sig(m)
            ),
            None => writeln!(f, "measured rate = n/a"),
        }
    }
}

fn build_records(report: &SolveReport, truth: Option<&EigenDecomposition>, inner_steps: usize) -> Vec<TraceRecord> {
    let mut records = Vec::new();
    for (k, (ritz, residuals)) in report.ritz_history.iter().zip(&report.residuals).enumerate() {
        let outer = k + 1;
        let trace_entry = report.trace.as_ref().and_then(|t| t.entry(outer));
        for i in 0..ritz.len() {
            records.push(TraceRecord {
                outer_iter: outer,
                inner_step: outer * inner_steps,
                i: i + 1,
                ritz_value: ritz[i],
                abs_err: truth.map(|t| (ritz[i] - t.eigenvalues[i]).abs()),
                component_ratio: trace_entry.map(|e| e.ratios[i]),
                tau: report.shifts[k],
                residual: residuals[i],
            });
        }
    }
    records
}

/// Builds the matrix, optionally computes the reference spectrum, solves, and
/// writes the trace CSV and error plot if paths are configured.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    let a = spec.source.build()?;
    let truth = if spec.compute_truth {
        Some(jacobi_eigensolve(&a).map_err(|e| e.with_context("reference eigendecomposition"))?)
    } else {
        None
    };
    let config = &spec.config;
    let report = solve(&a, config, truth.as_ref()).map_err(|e| e.with_context("solve"))?;
    let inner_steps = report.trace.as_ref().map_or(
        if config.inner == InnerSolver::Richardson { config.inner_steps } else { 1 },
        |t| t.inner_steps,
    );
    let records = build_records(&report, truth.as_ref(), inner_steps);

    let mut predicted = None;
    let mut closed = None;
    let summary = truth
        .as_ref()
        .and_then(|t| SpectrumSummary::from_spectrum(&t.eigenvalues, config.ell).ok());
    if let (Some(t), Some(summary)) = (&truth, summary) {
        closed = closed_form_rate(&summary).ok();
        if config.inner == InnerSolver::Richardson {
            if let Some(tau) = report.final_block.shift {
                predicted = predicted_rate(&t.eigenvalues, config.ell, config.theta, tau)
                    .ok()
                    .map(|p| p.rate);
            }
        }
    }

    let measured = report.trace.as_ref().and_then(|trace| {
        let i = config.ell - 1;
        let window = match spec.window {
            MeasureWindow::Fixed { start, end } => Some((start, end)),
            MeasureWindow::Auto => auto_window(trace, i, AUTO_WINDOW_FLOOR),
        }?;
        measured_rate(trace, i, window.0, window.1).ok().map(|m| (m, window))
    });

    if let Some(path) = &spec.trace_csv {
        write_atomically(path, &trace_to_csv(&records)?)?;
    }
    if let Some(path) = &spec.plot_svg {
        let columns: Vec<usize> = spec
            .plot_columns
            .clone()
            .unwrap_or_else(|| (1..=config.ell).collect());
        let chart = LineChart {
            title: "Eigenvalue error per outer iteration".into(),
            x_label: "outer iteration k".into(),
            y_label: "|lambda_i^(k) - lambda_i|".into(),
            log_x: false,
            log_y: true,
            series: columns
                .iter()
                .map(|&i| Series {
                    label: format!("lambda_{i}"),
                    points: records
                        .iter()
                        .filter(|r| r.i == i)
                        .filter_map(|r| Some((r.outer_iter as f64, r.abs_err?)))
                        .collect(),
                })
                .collect(),
        };
        write_atomically(path, &chart.to_svg())?;
    }

    Ok(ExperimentOutcome {
        report,
        truth,
        records,
        predicted_rate: predicted,
        closed_form_rate: closed,
        measured_rate: measured,
    })
}

/// The 4x4 diagonal reproduction: two desired eigenpairs, Richardson inner
/// step with theta 0.5 and the balancing shift, 500 outer iterations.
pub fn paper_preset(out_dir: Option<&Path>) -> ExperimentSpec {
    let config = SolverConfig {
        ell: 2,
        inner: InnerSolver::Richardson,
        theta: 0.5,
        inner_steps: 1,
        shift: ShiftStrategy::OptimalRate {
            lambda_ell_plus_1: 2.01,
            lambda_n: 4.0,
        },
        max_outer: 500,
        tol: 1e-14,
        seed: 0,
    };
    ExperimentSpec {
        source: MatrixSource::Diagonal(PAPER_SPECTRUM.to_vec()),
        config,
        compute_truth: true,
        trace_csv: out_dir.map(|d| d.join(PAPER_TRACE_FILE)),
        plot_svg: out_dir.map(|d| d.join(PAPER_PLOT_FILE)),
        plot_columns: Some(vec![2]),
        window: MeasureWindow::Fixed { start: 20, end: 500 },
    }
}

pub fn run_paper_reproduction(out_dir: Option<&Path>) -> Result<ExperimentOutcome> {
    run_experiment(&paper_preset(out_dir))
}

/// Spectrum template for gap sweeps: the desired eigenvalues end at
/// `lambda_ell`; the undesired ones are `lambda_ell + gap` and `lambda_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBase {
    /// Desired eigenvalues below `lambda_ell`, ascending.
    pub lower: Vec<f64>,
    pub lambda_ell: f64,
    pub lambda_n: f64,
}

impl SweepBase {
    /// `ell - 1` lower desired eigenvalues spaced 1 apart below `lambda_ell`.
    pub fn evenly_spaced(ell: usize, lambda_ell: f64, lambda_n: f64) -> Self {
        let lower = (1..ell).rev().map(|k| lambda_ell - k as f64).collect();
        SweepBase {
            lower,
            lambda_ell,
            lambda_n,
        }
    }

    pub fn ell(&self) -> usize {
        self.lower.len() + 1
    }

    pub fn spectrum(&self, gap: f64) -> Result<Vec<f64>> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::InvalidConfig(format!("gaps must be positive, got {gap}")));
        }
        let mut s = self.lower.clone();
        s.extend([self.lambda_ell, self.lambda_ell + gap, self.lambda_n]);
        if s.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidSpectrum(format!(
                "gap {gap} does not fit the template: spectrum {s:?} is not ascending"
            )));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gap: f64,
    pub predicted_rate: f64,
    pub measured_rate: Option<f64>,
}

pub const SWEEP_HEADER: &str = "gap,predicted_rate,measured_rate";

/// Runs one Richardson experiment per gap with the balancing shift and
/// compares the measured contraction against the gap formula.
///
/// Rows come back sorted by gap; the CSV and SVG are written when paths are
/// given.
pub fn run_gap_sweep(
    gaps: &[f64],
    base: &SweepBase,
    config: &SolverConfig,
    csv_path: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<Vec<SweepRow>> {
    if gaps.is_empty() {
        return Err(Error::Empty("gap list"));
    }
    let mut rows = Vec::with_capacity(gaps.len());
    for &gap in gaps {
        let spectrum = base.spectrum(gap)?;
        let summary = SpectrumSummary::new(base.lambda_ell, base.lambda_ell + gap, base.lambda_n)?;
        let config = SolverConfig {
            ell: base.ell(),
            inner: InnerSolver::Richardson,
            shift: ShiftStrategy::OptimalRate {
                lambda_ell_plus_1: summary.lambda_ell_plus_1,
                lambda_n: summary.lambda_n,
            },
            ..config.clone()
        };
        let spec = ExperimentSpec::new(MatrixSource::Diagonal(spectrum), config);
        let outcome = run_experiment(&spec).map_err(|e| e.with_context(format!("gap {gap}")))?;
        rows.push(SweepRow {
            gap,
            predicted_rate: closed_form_rate(&summary)?,
            measured_rate: outcome.measured_rate.map(|m| m.0),
        });
    }
    rows.sort_by(|a, b| a.gap.total_cmp(&b.gap));

    if let Some(path) = csv_path {
        write_atomically(path, &to_csv_string(&rows, SWEEP_HEADER)?)?;
    }
    if let Some(path) = svg_path {
        let chart = LineChart {
            title: "Contraction rate vs eigenvalue gap".into(),
            x_label: "gap lambda_(l+1) - lambda_l".into(),
            y_label: "rate per Richardson step".into(),
            log_x: true,
            log_y: false,
            series: vec![
                Series {
                    label: "predicted".into(),
                    points: rows.iter().map(|r| (r.gap, r.predicted_rate)).collect(),
                },
                Series {
                    label: "measured".into(),
                    points: rows
                        .iter()
                        .filter_map(|r| Some((r.gap, r.measured_rate?)))
                        .collect(),
                },
            ],
        };
        write_atomically(path, &chart.to_svg())?;
    }
    Ok(rows)
}
