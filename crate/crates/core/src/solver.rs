//! Block shift-inverse eigensolver.
//!
//! Each outer iteration picks a shift `tau_k`, pushes every block column
//! through an inner solve of `(A - tau_k I) x~ = x` and then extracts new
//! eigenpair approximations by Rayleigh-Ritz projection onto the span of the
//! inner solutions. The inner solve is either an exact LU solve or a fixed
//! number of Richardson applications `x <- x - theta((A - tau I)x - x)`, which
//! act on eigencomponent `j` as multiplication by `1 + theta(1 + tau) - theta lambda_j`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, jacobi_eigensolve, shifted_lu_solve, DenseSymMatrix, EigenDecomposition, Vector};
use crate::rate::{expand_components, optimal_shift, ComponentTrace, SpectrumSummary};

const ANNIHILATION_FLOOR: f64 = 1e-300;
const SHIFT_PERTURBATION: f64 = 1e-8;
const INIT_RETRIES: u64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerSolver {
    Direct,
    Richardson,
}

/// How `tau_k` is chosen at the start of each outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftStrategy {
    /// Lowest current Ritz value.
    Rayleigh,
    Fixed(f64),
    /// Balances the extreme undesired multipliers for the configured theta.
    OptimalRate { lambda_ell_plus_1: f64, lambda_n: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub ell: usize,
    pub inner: InnerSolver,
    pub theta: f64,
    pub inner_steps: usize,
    pub shift: ShiftStrategy,
    pub max_outer: usize,
    pub tol: f64,
    pub seed: u64,
}

impl SolverConfig {
    /// Richardson inner solve with theta 0.5, one step, Rayleigh shift.
    pub fn new(ell: usize) -> Self {
        SolverConfig {
            ell,
            inner: InnerSolver::Richardson,
            theta: 0.5,
            inner_steps: 1,
            shift: ShiftStrategy::Rayleigh,
            max_outer: 500,
            tol: 1e-10,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.ell < 1 {
            return bad("block size ell must be at least 1".into());
        }
        if self.inner == InnerSolver::Richardson && !(self.theta > 0.0 && self.theta < 1.0) {
            return bad(format!("theta must lie in the open interval (0,1), got {}", self.theta));
        }
        if self.inner_steps < 1 {
            return bad("inner_steps must be at least 1".into());
        }
        if self.max_outer < 1 {
            return bad("max_outer must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        match self.shift {
            ShiftStrategy::Fixed(tau) if !tau.is_finite() => bad(format!("fixed shift must be finite, got {tau}")),
            ShiftStrategy::OptimalRate {
                lambda_ell_plus_1,
                lambda_n,
            } if !(lambda_ell_plus_1 <= lambda_n) => bad(format!(
                "optimal-rate shift needs lambda_l+1 <= lambda_n, got {lambda_ell_plus_1} > {lambda_n}"
            )),
            _ => Ok(()),
        }
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if !block_size_fits(self.ell, n) {
            return Err(Error::InvalidConfig(format!(
                "block size must satisfy ell < n, got ell = {}, n = {n}",
                self.ell
            )));
        }
        Ok(())
    }
}

/// The current eigenpair approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateBlock {
    /// Unit-norm columns `x_i`.
    pub columns: Vec<Vector>,
    /// Ritz values, ascending.
    pub ritz_values: Vec<f64>,
    pub outer_index: usize,
    /// Shift used by the outer iteration that produced this block.
    pub shift: Option<f64>,
}

impl IterateBlock {
    pub fn ell(&self) -> usize {
        self.columns.len()
    }

    /// `|A x_i - lambda_i x_i|_2` per column.
    pub fn residuals(&self, a: &DenseSymMatrix) -> Result<Vec<f64>> {
        self.columns
            .iter()
            .zip(&self.ritz_values)
            .map(|(x, lambda)| {
                let ax = a.matvec(x)?;
                Ok(ax
                    .as_slice()
                    .iter()
                    .zip(x.as_slice())
                    .map(|(p, q)| (p - lambda * q).powi(2))
                    .sum::<f64>()
                    .sqrt())
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub final_block: IterateBlock,
    pub outer_iterations_used: usize,
    /// Per outer iteration, the residual of every block column.
    pub residuals: Vec<Vec<f64>>,
    /// Shift used at each outer iteration.
    pub shifts: Vec<f64>,
    /// Ritz values after each outer iteration.
    pub ritz_history: Vec<Vec<f64>>,
    pub converged: bool,
    /// Present when the true eigendecomposition was supplied.
    pub trace: Option<ComponentTrace>,
}

// 1 <= ell < n, plus the scalar problem n = ell = 1.
fn block_size_fits(ell: usize, n: usize) -> bool {
    ell >= 1 && (ell < n || n == 1 && ell == 1)
}

/// Seeded uniform(-1, 1) starting block, orthonormalized.
///
/// With `a` supplied the block is also Rayleigh-Ritz projected, so the columns
/// are Ritz vectors and the Ritz values are their Rayleigh quotients.
pub fn init_random_block(n: usize, ell: usize, seed: u64, a: Option<&DenseSymMatrix>) -> Result<IterateBlock> {
    if !block_size_fits(ell, n) {
        return Err(Error::InvalidConfig(format!(
            "block size must satisfy 1 <= ell < n, got ell = {ell}, n = {n}"
        )));
    }
    if let Some(a) = a {
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dim(),
            });
        }
    }
    let mut last_err = None;
    for attempt in 0..=INIT_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let raw: Vec<Vector> = (0..ell)
            .map(|_| Vector::from_raw((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        let columns = match gram_schmidt(&raw) {
            Ok(c) => c,
            Err(e @ Error::RankDeficient { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        return match a {
            Some(a) => rayleigh_ritz(a, &columns),
            None => Ok(IterateBlock {
                columns,
                ritz_values: vec![0.0; ell],
                outer_index: 0,
                shift: None,
            }),
        };
    }
    Err(last_err.unwrap_or(Error::RankDeficient { column: 0 }))
}

/// `(A - tau I)^{-1} x_i` for every block column, unnormalized.
pub fn inner_solve_direct(a: &DenseSymMatrix, tau: f64, block: &IterateBlock) -> Result<Vec<Vector>> {
    block.columns.iter().map(|x| shifted_lu_solve(a, tau, x)).collect()
}

/// `m` Richardson applications per column, renormalizing after each one.
pub fn inner_solve_richardson(
    a: &DenseSymMatrix,
    tau: f64,
    theta: f64,
    m: usize,
    block: &IterateBlock,
) -> Result<Vec<Vector>> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "theta must lie in the open interval (0,1), got {theta}"
        )));
    }
    if m < 1 {
        return Err(Error::InvalidConfig("inner_steps must be at least 1".into()));
    }
    let c = 1.0 + theta * (1.0 + tau);
    block
        .columns
        .iter()
        .map(|x| {
            let mut x = x.clone();
            for _ in 0..m {
                let ax = a.matvec(&x)?;
                let y: Vec<f64> = x
                    .as_slice()
                    .iter()
                    .zip(ax.as_slice())
                    .map(|(xi, axi)| c * xi - theta * axi)
                    .collect();
                let y = Vector::from_raw(y);
                let norm = y.norm();
                if !(norm >= ANNIHILATION_FLOOR) || !norm.is_finite() {
                    return Err(Error::Annihilation { tau, theta });
                }
                x = y.scaled(1.0 / norm);
            }
            Ok(x)
        })
        .collect()
}

/// Projects `A` onto the span of `columns` and returns the Ritz pairs.
///
/// Columns are orthonormalized first, so the projected problem is a standard
/// `ell x ell` symmetric one. Each Ritz vector is signed so that its
/// largest-magnitude component is non-negative.
pub fn rayleigh_ritz(a: &DenseSymMatrix, columns: &[Vector]) -> Result<IterateBlock> {
    let q = gram_schmidt(columns)?;
    let ell = q.len();
    let aq = q.iter().map(|x| a.matvec(x)).collect::<Result<Vec<_>>>()?;
    let mut h = vec![0.0; ell * ell];
    for i in 0..ell {
        for j in 0..=i {
            let v = 0.5 * (q[i].dot(&aq[j]) + q[j].dot(&aq[i]));
            h[i * ell + j] = v;
            h[j * ell + i] = v;
        }
    }
    let projected = DenseSymMatrix::from_row_major(ell, h)?;
    let small = jacobi_eigensolve(&projected)?;

    let n = a.dim();
    let columns = small
        .eigenvectors
        .iter()
        .map(|z| {
            let mut x = vec![0.0; n];
            for (qk, zk) in q.iter().zip(z.as_slice()) {
                for (xi, qi) in x.iter_mut().zip(qk.as_slice()) {
                    *xi += zk * qi;
                }
            }
            let x = Vector::from_raw(x);
            if x[x.argmax_abs()] < 0.0 {
                x.scaled(-1.0)
            } else {
                x
            }
        })
        .collect();
    Ok(IterateBlock {
        columns,
        ritz_values: small.eigenvalues,
        outer_index: 0,
        shift: None,
    })
}

/// The shift the configured strategy selects for `block`.
pub fn resolve_shift(config: &SolverConfig, block: &IterateBlock) -> Result<f64> {
    match config.shift {
        ShiftStrategy::Rayleigh => block.ritz_values.first().copied().ok_or_else(|| {
            Error::InvalidConfig("Rayleigh shift needs populated Ritz values".into())
        }),
        ShiftStrategy::Fixed(tau) => Ok(tau),
        ShiftStrategy::OptimalRate {
            lambda_ell_plus_1,
            lambda_n,
        } => {
            let summary = SpectrumSummary::new(lambda_ell_plus_1, lambda_ell_plus_1, lambda_n)?;
            optimal_shift(&summary, config.theta)
        }
    }
}

/// One outer iteration: shift selection, inner solve, Rayleigh-Ritz.
///
/// A direct solve that hits a singular pivot is retried once with the shift
/// moved by `1e-8 |A|_F`; the recorded shift is the one actually used.
pub fn outer_iterate(a: &DenseSymMatrix, config: &SolverConfig, block: &IterateBlock) -> Result<IterateBlock> {
    let mut tau = resolve_shift(config, block)?;
    let solved = match config.inner {
        InnerSolver::Richardson => inner_solve_richardson(a, tau, config.theta, config.inner_steps, block)?,
        InnerSolver::Direct => match inner_solve_direct(a, tau, block) {
            Err(Error::NearSingularShift { .. }) => {
                tau += SHIFT_PERTURBATION * a.frobenius_norm().max(f64::MIN_POSITIVE);
                inner_solve_direct(a, tau, block)?
            }
            other => other?,
        },
    };
    let mut next = rayleigh_ritz(a, &solved)?;
    next.outer_index = block.outer_index + 1;
    next.shift = Some(tau);
    Ok(next)
}

/// Runs outer iterations from a random start until every residual is at most
/// `config.tol` or `config.max_outer` iterations have been spent.
pub fn solve(a: &DenseSymMatrix, config: &SolverConfig, truth: Option<&EigenDecomposition>) -> Result<SolveReport> {
    config.validate_for(a.dim())?;
    let block = init_random_block(a.dim(), config.ell, config.seed, Some(a))?;
    solve_from(a, config, block, truth)
}

/// Like [`solve`], starting from a caller-provided block.
pub fn solve_from(
    a: &DenseSymMatrix,
    config: &SolverConfig,
    start: IterateBlock,
    truth: Option<&EigenDecomposition>,
) -> Result<SolveReport> {
    config.validate_for(a.dim())?;
    if start.ell() != config.ell {
        return Err(Error::DimensionMismatch {
            expected: config.ell,
            found: start.ell(),
        });
    }
    let inner_steps = match config.inner {
        InnerSolver::Richardson => config.inner_steps,
        InnerSolver::Direct => 1,
    };
    let mut trace = match truth {
        Some(t) => {
            if t.dim() != a.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    found: t.dim(),
                });
            }
            let mut trace = ComponentTrace::new(config.ell, inner_steps);
            trace.record(start.outer_index, expand_components(t, &start)?);
            Some(trace)
        }
        None => None,
    };

    let mut block = start;
    let mut residuals = Vec::new();
    let mut shifts = Vec::new();
    let mut ritz_history = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_outer {
        block = outer_iterate(a, config, &block)?;
        let r = block.residuals(a)?;
        let worst = r.iter().copied().fold(0.0, f64::max);
        residuals.push(r);
        shifts.push(block.shift.unwrap_or(f64::NAN));
        ritz_history.push(block.ritz_values.clone());
        if let (Some(trace), Some(t)) = (trace.as_mut(), truth) {
            trace.record(block.outer_index, expand_components(t, &block)?);
        }
        if worst <= config.tol {
            converged = true;
            break;
        }
    }
    Ok(SolveReport {
        outer_iterations_used: residuals.len(),
        final_block: block,
        residuals,
        shifts,
        ritz_history,
        converged,
        trace,
    })
}
