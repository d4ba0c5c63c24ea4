//! Browser bindings for the shiftinv demo page.
//!
//! Every export takes plain numbers or comma-separated lists and returns a
//! JSON string, so the same functions run natively under `cargo test`.

use serde::Serialize;
use serde_json::json;
use shiftinv::harness::svg::{LineChart, Series};
use shiftinv::harness::{run_experiment, run_gap_sweep, ExperimentSpec, MatrixSource, MeasureWindow, SweepBase};
use shiftinv::rate::{closed_form_rate, iteration_multipliers, optimal_shift};
use shiftinv::{InnerSolver, ShiftStrategy, SolverConfig, SpectrumSummary};
use wasm_bindgen::prelude::*;

const MAX_OUTER_LIMIT: usize = 5000;
const MAX_DIM: usize = 64;

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
        .collect()
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Balancing shift, gap rate, and the three extreme multipliers.
#[wasm_bindgen]
pub fn predict(lambda_l: f64, lambda_l1: f64, lambda_n: f64, theta: f64) -> String {
    respond((|| {
        let summary = SpectrumSummary::new(lambda_l, lambda_l1, lambda_n).map_err(|e| e.to_string())?;
        let tau = optimal_shift(&summary, theta).map_err(|e| e.to_string())?;
        let rate = closed_form_rate(&summary).map_err(|e| e.to_string())?;
        let g = iteration_multipliers(&[lambda_l, lambda_l1, lambda_n], theta, tau);
        Ok(json!({ "tau": tau, "rate": rate, "multipliers": g }))
    })())
}

/// Runs the Richardson solver with the balancing shift on `diag(spectrum)` and
/// returns the eigenvalue-error chart together with predicted and measured
/// rates.
#[wasm_bindgen]
pub fn run_richardson(spectrum: &str, ell: usize, theta: f64, max_outer: usize, seed: u32) -> String {
    respond((|| {
        let mut values = parse_list(spectrum)?;
        if values.len() > MAX_DIM {
            return Err(format!("at most {MAX_DIM} eigenvalues"));
        }
        if max_outer > MAX_OUTER_LIMIT {
            return Err(format!("at most {MAX_OUTER_LIMIT} outer iterations"));
        }
        values.sort_by(f64::total_cmp);
        let summary = SpectrumSummary::from_spectrum(&values, ell).map_err(|e| e.to_string())?;
        let config = SolverConfig {
            ell,
            inner: InnerSolver::Richardson,
            theta,
            inner_steps: 1,
            shift: ShiftStrategy::OptimalRate {
                lambda_ell_plus_1: summary.lambda_ell_plus_1,
                lambda_n: summary.lambda_n,
            },
            max_outer,
            tol: 1e-14,
            seed: u64::from(seed),
        };
        let mut spec = ExperimentSpec::new(MatrixSource::Diagonal(values), config);
        spec.window = MeasureWindow::Auto;
        let outcome = run_experiment(&spec).map_err(|e| e.to_string())?;
        let chart = LineChart {
            title: "Eigenvalue error per outer iteration".into(),
            x_label: "outer iteration k".into(),
            y_label: "|lambda_i^(k) - lambda_i|".into(),
            log_x: false,
            log_y: true,
            series: (1..=ell)
                .map(|i| Series {
                    label: format!("lambda_{i}"),
                    points: outcome
                        .records
                        .iter()
                        .filter(|r| r.i == i)
                        .filter_map(|r| Some((r.outer_iter as f64, r.abs_err?)))
                        .collect(),
                })
                .collect(),
        };
        Ok(json!({
            "svg": chart.to_svg(),
            "tau": outcome.final_shift(),
            "predicted_rate": outcome.predicted_rate,
            "closed_form_rate": outcome.closed_form_rate,
            "measured_rate": outcome.measured_rate.map(|m| m.0),
            "window": outcome.measured_rate.map(|m| m.1),
            "ritz_values": outcome.report.final_block.ritz_values,
            "iterations": outcome.report.outer_iterations_used,
            "converged": outcome.report.converged,
        }))
    })())
}

/// Predicted and measured rates for each gap, plus the rate-vs-gap chart.
#[wasm_bindgen]
pub fn gap_sweep(gaps: &str, lambda_l: f64, lambda_n: f64, theta: f64, max_outer: usize) -> String {
    respond((|| {
        let gaps = parse_list(gaps)?;
        if gaps.len() > 32 {
            return Err("at most 32 gaps".into());
        }
        if max_outer > MAX_OUTER_LIMIT {
            return Err(format!("at most {MAX_OUTER_LIMIT} outer iterations"));
        }
        let config = SolverConfig {
            theta,
            max_outer,
            tol: 1e-14,
            ..SolverConfig::new(2)
        };
        let base = SweepBase::evenly_spaced(2, lambda_l, lambda_n);
        let rows = run_gap_sweep(&gaps, &base, &config, None, None).map_err(|e| e.to_string())?;
        let chart = LineChart {
            title: "Contraction rate vs eigenvalue gap".into(),
            x_label: "gap lambda_3 - lambda_2".into(),
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
                    points: rows.iter().filter_map(|r| Some((r.gap, r.measured_rate?))).collect(),
                },
            ],
        };
        Ok(json!({ "svg": chart.to_svg(), "rows": rows }))
    })())
}
