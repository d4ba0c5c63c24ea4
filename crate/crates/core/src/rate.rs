//! Convergence-rate analysis for the Richardson-accelerated shift-inverse
//! iteration.
//!
//! One Richardson application with relaxation `theta` and shift `tau` acts on
//! the eigencomponent `j` of an iterate by the multiplier
//! `g_j = 1 + theta (1 + tau) - theta lambda_j`. The predicted per-step
//! contraction of the undesired components relative to the desired ones is
//! `max_{j > ell} |g_j| / min_{j <= ell} |g_j|`. Balancing `|g_{ell+1}|` against
//! `|g_n|` gives the optimal shift and a rate that depends only on the gap
//! `lambda_{ell+1} - lambda_ell` measured against the spread of the spectrum.

use crate::error::{Error, Result};
use crate::linalg::{dot, EigenDecomposition};
use crate::solver::IterateBlock;

/// The three eigenvalues the closed-form rate depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSummary {
    /// Largest desired eigenvalue.
    pub lambda_ell: f64,
    /// Smallest undesired eigenvalue.
    pub lambda_ell_plus_1: f64,
    /// Largest eigenvalue.
    pub lambda_n: f64,
}

impl SpectrumSummary {
    pub fn new(lambda_ell: f64, lambda_ell_plus_1: f64, lambda_n: f64) -> Result<Self> {
        if ![lambda_ell, lambda_ell_plus_1, lambda_n].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSpectrum("eigenvalues must be finite".into()));
        }
        if !(lambda_ell <= lambda_ell_plus_1 && lambda_ell_plus_1 <= lambda_n) {
            return Err(Error::InvalidSpectrum(format!(
                "expected lambda_l <= lambda_l+1 <= lambda_n, got {lambda_ell}, {lambda_ell_plus_1}, {lambda_n}"
            )));
        }
        Ok(SpectrumSummary {
            lambda_ell,
            lambda_ell_plus_1,
            lambda_n,
        })
    }

    /// Reads the summary off an ascending spectrum for block size `ell`.
    pub fn from_spectrum(spectrum: &[f64], ell: usize) -> Result<Self> {
        check_ell(spectrum, ell)?;
        Self::new(spectrum[ell - 1], spectrum[ell], spectrum[spectrum.len() - 1])
    }

    pub fn gap(&self) -> f64 {
        self.lambda_ell_plus_1 - self.lambda_ell
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePrediction {
    pub rate: f64,
    pub tau: f64,
    pub theta: f64,
}

fn check_ell(spectrum: &[f64], ell: usize) -> Result<()> {
    if ell == 0 || ell >= spectrum.len() {
        return Err(Error::InvalidConfig(format!(
            "block size must satisfy 1 <= ell < n, got ell = {ell}, n = {}",
            spectrum.len()
        )));
    }
    if spectrum.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidSpectrum("spectrum must be sorted ascending".into()));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "theta must lie in the open interval (0,1), got {theta}"
        )));
    }
    Ok(())
}

/// Per-eigencomponent factors `g_j = 1 + theta (1 + tau) - theta lambda_j`.
pub fn iteration_multipliers(spectrum: &[f64], theta: f64, tau: f64) -> Vec<f64> {
    let c = 1.0 + theta * (1.0 + tau);
    spectrum.iter().map(|l| c - theta * l).collect()
}

/// Ratio of the largest undesired multiplier to the smallest desired one,
/// evaluated over the full ascending `spectrum`.
pub fn predicted_rate(spectrum: &[f64], ell: usize, theta: f64, tau: f64) -> Result<RatePrediction> {
    check_ell(spectrum, ell)?;
    let g = iteration_multipliers(spectrum, theta, tau);
    let desired = g[..ell].iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let undesired = g[ell..].iter().map(|v| v.abs()).fold(0.0, f64::max);
    if desired < 1e-300 {
        return Err(Error::DegenerateShift { tau });
    }
    Ok(RatePrediction {
        rate: undesired / desired,
        tau,
        theta,
    })
}

/// Shift that balances `|g_{ell+1}|` and `|g_n|`:
/// `tau = (lambda_{ell+1} + lambda_n) / 2 - 1/theta - 1`.
pub fn optimal_shift(summary: &SpectrumSummary, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok((summary.lambda_ell_plus_1 + summary.lambda_n) / 2.0 - 1.0 / theta - 1.0)
}

/// Rate under the optimal shift:
/// `(lambda_n - lambda_{ell+1}) / (lambda_n + lambda_{ell+1} - 2 lambda_ell)`.
///
/// A zero gap returns 1, the limit of the formula.
pub fn closed_form_rate(summary: &SpectrumSummary) -> Result<f64> {
    let SpectrumSummary {
        lambda_ell,
        lambda_ell_plus_1,
        lambda_n,
    } = *summary;
    if lambda_ell == lambda_ell_plus_1 {
        return Ok(1.0);
    }
    let denominator = lambda_n + lambda_ell_plus_1 - 2.0 * lambda_ell;
    if !(denominator > 0.0) {
        return Err(Error::InvalidSpectrum(format!(
            "lambda_n + lambda_l+1 - 2 lambda_l must be positive, got {denominator}"
        )));
    }
    Ok((lambda_n - lambda_ell_plus_1) / denominator)
}

/// Evaluates the rate twice: through the multipliers at the optimal shift,
/// and through the closed form. Returns `(multiplier_route, closed_form)`.
pub fn rate_consistency_check(spectrum: &[f64], ell: usize, theta: f64) -> Result<(f64, f64)> {
    let summary = SpectrumSummary::from_spectrum(spectrum, ell)?;
    let tau = optimal_shift(&summary, theta)?;
    let via_multipliers = predicted_rate(spectrum, ell, theta, tau)?.rate;
    Ok((via_multipliers, closed_form_rate(&summary)?))
}

/// Coefficients `alpha_ij = phi_j^T x_i` of each block column in the
/// eigenbasis of `truth`; row `i` belongs to block column `i`.
pub fn expand_components(truth: &EigenDecomposition, block: &IterateBlock) -> Result<Vec<Vec<f64>>> {
    let n = truth.dim();
    block
        .columns
        .iter()
        .map(|x| {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.len(),
                });
            }
            Ok(truth
                .eigenvectors
                .iter()
                .map(|phi| dot(phi.as_slice(), x.as_slice()))
                .collect())
        })
        .collect()
}

/// Norm of the undesired coefficients (`j >= ell`, zero-based) over the norm of
/// the desired ones.
pub fn component_ratio(coefficients: &[f64], ell: usize) -> f64 {
    let (desired, undesired) = coefficients.split_at(ell.min(coefficients.len()));
    let sq = |s: &[f64]| s.iter().map(|a| a * a).sum::<f64>().sqrt();
    sq(undesired) / sq(desired)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub outer_index: usize,
    /// `ell x n` eigenbasis coefficients.
    pub coefficients: Vec<Vec<f64>>,
    /// Component ratio per block column.
    pub ratios: Vec<f64>,
}

/// Eigenbasis coefficients of the iterate recorded once per outer iteration.
///
/// Entry `k` holds the block after `k` outer iterations; entry 0 is the
/// starting block.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTrace {
    pub ell: usize,
    /// Richardson applications per outer iteration (1 for the direct path).
    pub inner_steps: usize,
    pub entries: Vec<TraceEntry>,
}

impl ComponentTrace {
    pub fn new(ell: usize, inner_steps: usize) -> Self {
        ComponentTrace {
            ell,
            inner_steps,
            entries: Vec::new(),
        }
    }

    pub fn record(&mut self, outer_index: usize, coefficients: Vec<Vec<f64>>) {
        let ratios = coefficients
            .iter()
            .map(|row| component_ratio(row, self.ell))
            .collect();
        self.entries.push(TraceEntry {
            outer_index,
            coefficients,
            ratios,
        });
    }

    pub fn entry(&self, k: usize) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.outer_index == k)
    }

    pub fn ratio(&self, k: usize, i: usize) -> Option<f64> {
        self.entry(k).and_then(|e| e.ratios.get(i).copied())
    }

    pub fn last_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.outer_index)
    }
}

/// Geometric-mean contraction of the component ratio of block column `i`
/// between outer iterations `k_start` and `k_end`, per Richardson application.
pub fn measured_rate(trace: &ComponentTrace, i: usize, k_start: usize, k_end: usize) -> Result<f64> {
    if k_start >= k_end {
        return Err(Error::InvalidConfig(format!(
            "measurement window needs k_start < k_end, got [{k_start}, {k_end}]"
        )));
    }
    let lookup = |k: usize| {
        trace.ratio(k, i).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "trace has no entry for iteration {k}, block index {i}"
            ))
        })
    };
    let start = lookup(k_start)?;
    let end = lookup(k_end)?;
    if start == 0.0 {
        return Err(Error::AlreadyConverged { k: k_start });
    }
    let steps = ((k_end - k_start) * trace.inner_steps.max(1)) as f64;
    Ok((end / start).powf(1.0 / steps))
}

/// Picks a measurement window for block column `i` that stays above the
/// rounding floor: it ends just before the ratio first drops below `floor`
/// and skips the first fifth as transient.
pub fn auto_window(trace: &ComponentTrace, i: usize, floor: f64) -> Option<(usize, usize)> {
    let mut end = None;
    for e in &trace.entries {
        match e.ratios.get(i) {
            Some(&r) if r >= floor => end = Some(e.outer_index),
            _ => break,
        }
    }
    let end = end?;
    let first = trace.entries.first()?.outer_index;
    let start = (first + (end - first) / 5).max(first + 1);
    (start < end).then_some((start, end))
}
