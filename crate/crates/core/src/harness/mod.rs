//! Matrix generators, experiment drivers, and file output (CSV traces, SVG
//! charts).

mod experiment;
mod generators;
pub mod svg;
pub mod trace;

pub use experiment::{
    paper_preset, run_experiment, run_gap_sweep, run_paper_reproduction, ExperimentOutcome, ExperimentSpec,
    MatrixSource, MeasureWindow, SweepBase, SweepRow, AUTO_WINDOW_FLOOR, PAPER_PLOT_FILE, PAPER_SPECTRUM,
    PAPER_TRACE_FILE, SWEEP_HEADER,
};
pub use generators::{gen_diag, gen_laplacian_1d};
pub use trace::{parse_trace_csv, trace_to_csv, TraceRecord, TRACE_HEADER};

/// Formats `x` rounded to 12 significant digits, then printed in shortest
/// form, so `0.004999999999999893` reads as `0.005`.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.11e}", x).parse().unwrap_or(x);
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_sig_trims_rounding_noise() {
        let tau = (2.01 + 4.0) / 2.0 - 1.0 / 0.5 - 1.0;
        assert_ne!(tau, 0.005);
        assert_eq!(format_sig(tau), "0.005");
        assert_eq!(format_sig(1.99 / 2.01), "0.990049751244");
        assert_eq!(format_sig(-3.0), "-3");
        assert_eq!(format_sig(f64::INFINITY), "inf");
    }
}
