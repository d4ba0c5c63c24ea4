//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]` or `[FAIL]` line; run with `--nocapture` to see them.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftinv::harness::{
    gen_diag, gen_laplacian_1d, paper_preset, parse_trace_csv, run_experiment, run_gap_sweep, trace_to_csv, SweepBase,
    PAPER_PLOT_FILE, PAPER_TRACE_FILE,
};
use shiftinv::linalg::{jacobi_eigensolve, DenseSymMatrix, EigenDecomposition, Vector};
use shiftinv::rate::{expand_components, iteration_multipliers, rate_consistency_check};
use shiftinv::solver::{init_random_block, inner_solve_richardson, outer_iterate, solve};
use shiftinv::{InnerSolver, IterateBlock, ShiftStrategy, SolverConfig};

const PAPER_RATE: f64 = 1.99 / 2.01;

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] AC{id} {title}: {detail}");
    assert!(ok, "AC{id} {title}: {detail}");
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut s: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    s.sort_by(f64::total_cmp);
    s
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DenseSymMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.gen_range(-1.0..1.0);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    DenseSymMatrix::from_row_major(n, data).unwrap()
}

fn orthonormality_defect(columns: &[Vector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in columns.iter().enumerate() {
        for (j, b) in columns.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - target).abs());
        }
    }
    worst
}

#[test]
fn ac1_shift_reproduction() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_shiftinv"))
        .args(["predict-rate", "--lambda-l", "2", "--lambda-l1", "2.01", "--lambda-n", "4", "--theta", "0.5"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let tau_line = stdout.lines().find(|l| l.starts_with("tau = ")).unwrap_or("<missing>");
    let ok = out.status.success() && tau_line == "tau = 0.005" && elapsed < Duration::from_millis(100);
    verdict(1, "shift reproduction", ok, format!("printed {tau_line:?} in {}", ms(elapsed)));
}

#[test]
fn ac2_rate_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_shiftinv"))
        .args(["reproduce-paper", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let measured: Option<f64> = stdout
        .lines()
        .find_map(|l| l.strip_prefix("measured rate = "))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|v| v.parse().ok());
    let window_ok = stdout.contains("window [20, 500]");

    let csv = fs::read_to_string(dir.path().join(PAPER_TRACE_FILE)).unwrap_or_default();
    let err2: Vec<f64> = parse_trace_csv(&csv)
        .unwrap_or_default()
        .iter()
        .filter(|r| r.i == 2)
        .filter_map(|r| r.abs_err)
        .collect();
    let (first, last) = (err2.first().copied().unwrap_or(f64::NAN), err2.last().copied().unwrap_or(f64::NAN));
    let decreasing = last < first;

    let within = measured.is_some_and(|m| (m - PAPER_RATE).abs() <= 0.005);
    let ok = out.status.success() && within && window_ok && decreasing && elapsed < Duration::from_secs(1);
    verdict(
        2,
        "rate reproduction",
        ok,
        format!(
            "measured {} vs {PAPER_RATE:.6} on [20, 500], lambda_2 error {first:.3e} -> {last:.3e}, {}",
            measured.map_or("n/a".into(), |m| format!("{m:.9}")),
            ms(elapsed)
        ),
    );
}

#[test]
fn ac3_derivation_chain_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_consistency: f64 = 0.0;
    let mut worst_theta: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.gen_range(4..=50);
        let spectrum = random_spectrum(&mut rng, n);
        let ell = rng.gen_range(1..n);
        let theta = rng.gen_range(0.05..0.95);
        let other_theta = rng.gen_range(0.05..0.95);
        let (via_multipliers, closed) = rate_consistency_check(&spectrum, ell, theta).unwrap();
        let (again, _) = rate_consistency_check(&spectrum, ell, other_theta).unwrap();
        let scale = if closed > 0.0 { closed } else { 1.0 };
        let consistency = (via_multipliers - closed).abs() / scale;
        let drift = (via_multipliers - again).abs() / scale;
        if consistency > 1e-12 || drift > 1e-12 {
            failures += 1;
        }
        worst_consistency = worst_consistency.max(consistency);
        worst_theta = worst_theta.max(drift);
    }
    verdict(
        3,
        "derivation-chain identity",
        failures == 0,
        format!("100 spectra, worst relative gap {worst_consistency:.2e}, worst theta drift {worst_theta:.2e}"),
    );
}

#[test]
fn ac4_multiplier_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for instance in 0..50 {
        let n = rng.gen_range(2..=30);
        let spectrum = random_spectrum(&mut rng, n);
        let theta = rng.gen_range(0.05..0.95);
        let tau = rng.gen_range(-5.0..5.0);
        let a = gen_diag(&spectrum).unwrap();
        let truth = jacobi_eigensolve(&a).unwrap();
        let start = init_random_block(n, 1, instance, None).unwrap();
        let next = IterateBlock {
            columns: inner_solve_richardson(&a, tau, theta, 1, &start).unwrap(),
            ..start.clone()
        };
        let before = &expand_components(&truth, &start).unwrap()[0];
        let after = &expand_components(&truth, &next).unwrap()[0];
        let g = iteration_multipliers(&truth.eigenvalues, theta, tau);
        let scaled: Vec<f64> = g.iter().zip(before).map(|(g, a)| g * a).collect();
        let norm = scaled.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (want, got) in scaled.iter().zip(after) {
            worst = worst.max((want / norm - got).abs());
        }
    }
    verdict(
        4,
        "multiplier exactness",
        worst <= 1e-13,
        format!("50 diagonal instances, worst componentwise deviation {worst:.2e}"),
    );
}

#[test]
fn ac5_oracle_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_reconstruction: f64 = 0.0;
    let mut worst_orthonormality: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=50);
        let a = random_symmetric(&mut rng, n);
        let eig = jacobi_eigensolve(&a).unwrap();
        let back = eig.reconstruct();
        let mut diff = 0.0;
        for i in 0..n {
            for j in 0..n {
                diff += (a.get(i, j) - back.get(i, j)).powi(2);
            }
        }
        worst_reconstruction = worst_reconstruction.max(diff.sqrt() / a.frobenius_norm());
        worst_orthonormality = worst_orthonormality.max(orthonormality_defect(&eig.eigenvectors));
    }
    let ok = worst_reconstruction <= 1e-10 && worst_orthonormality <= 1e-12;
    verdict(
        5,
        "oracle validity",
        ok,
        format!(
            "100 matrices, worst relative reconstruction {worst_reconstruction:.2e}, worst orthonormality {worst_orthonormality:.2e}"
        ),
    );
}

#[test]
fn ac6_fast_path_sanity() {
    let a = gen_diag(&[1.0, 2.0, 2.01, 4.0]).unwrap();
    let config = SolverConfig {
        ell: 1,
        inner: InnerSolver::Direct,
        shift: ShiftStrategy::Rayleigh,
        max_outer: 6,
        tol: 1e-15,
        seed: 0,
        ..SolverConfig::new(1)
    };
    let report = solve(&a, &config, None).unwrap();
    let ritz: Vec<f64> = report.ritz_history.iter().map(|r| r[0]).collect();
    let errors: Vec<f64> = ritz.iter().map(|v| (v - 1.0).abs()).collect();
    let reached = errors.iter().any(|&e| e < 1e-10);

    // a step is superlinear if it beats e^1.5 or has hit the rounding floor
    let floor = 4.0 * f64::EPSILON;
    let superlinear = |e: &[f64]| {
        e.windows(2)
            .filter(|w| w[0] < 1e-2)
            .all(|w| w[1] <= w[0].powf(1.5).max(floor))
    };
    let ok = reached && superlinear(&errors);

    let limit = *ritz.last().unwrap();
    let target = [1.0, 2.0, 2.01, 4.0]
        .into_iter()
        .min_by(|x, y| (x - limit).abs().total_cmp(&(y - limit).abs()))
        .unwrap();
    let to_target: Vec<f64> = ritz.iter().map(|v| (v - target).abs()).collect();
    verdict(
        6,
        "fast path sanity",
        ok,
        format!(
            "lambda_1 errors {:?}; iteration converged to lambda = {target} instead (errors {:?}, superlinear: {})",
            errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>(),
            to_target.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>(),
            superlinear(&to_target)
        ),
    );
}

#[test]
fn ac7_gap_sweep() {
    let config = SolverConfig {
        tol: 1e-14,
        ..SolverConfig::new(2)
    };
    let base = SweepBase::evenly_spaced(2, 2.0, 4.0);
    let start = Instant::now();
    let rows = run_gap_sweep(&[1.0, 0.1, 0.01], &base, &config, None, None).unwrap();
    let elapsed = start.elapsed();

    let expected = [(0.01, 1.99 / 2.01), (0.1, 1.9 / 2.1), (1.0, 1.0 / 3.0)];
    let mut ok = rows.len() == 3 && elapsed < Duration::from_secs(5);
    let mut parts = Vec::new();
    for (row, (gap, want)) in rows.iter().zip(expected) {
        let measured = row.measured_rate.unwrap_or(f64::NAN);
        ok &= row.gap == gap && (measured - want).abs() <= 0.01;
        parts.push(format!("gap {gap}: {measured:.6} vs {want:.6}"));
    }
    let increasing = rows
        .windows(2)
        .all(|w| w[0].measured_rate.unwrap_or(f64::NAN) > w[1].measured_rate.unwrap_or(f64::NAN));
    ok &= increasing;
    verdict(
        7,
        "gap sweep",
        ok,
        format!("{}; increasing as gap shrinks: {increasing}; {}", parts.join(", "), ms(elapsed)),
    );
}

fn iterate_checking_orthonormality(a: &DenseSymMatrix, config: &SolverConfig, steps: usize) -> f64 {
    let mut block = init_random_block(a.dim(), config.ell, config.seed, Some(a)).unwrap();
    let mut worst = orthonormality_defect(&block.columns);
    for _ in 0..steps {
        block = outer_iterate(a, config, &block).unwrap();
        worst = worst.max(orthonormality_defect(&block.columns));
    }
    worst
}

fn normalization_defect(truth: &EigenDecomposition, a: &DenseSymMatrix, config: &SolverConfig) -> f64 {
    let report = solve(a, config, Some(truth)).unwrap();
    let trace = report.trace.unwrap();
    trace
        .entries
        .iter()
        .flat_map(|e| &e.coefficients)
        .map(|row| (row.iter().map(|c| c * c).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn ac8_invariant_suite() {
    let paper = gen_diag(&[1.0, 2.0, 2.01, 4.0]).unwrap();
    let laplacian = gen_laplacian_1d(12).unwrap();
    let richardson = paper_preset(None).config;
    let direct = SolverConfig {
        ell: 3,
        inner: InnerSolver::Direct,
        max_outer: 30,
        tol: 1e-14,
        ..SolverConfig::new(3)
    };

    let orth = iterate_checking_orthonormality(&paper, &richardson, 500)
        .max(iterate_checking_orthonormality(&laplacian, &direct, 30));
    let norm = normalization_defect(&jacobi_eigensolve(&paper).unwrap(), &paper, &richardson)
        .max(normalization_defect(&jacobi_eigensolve(&laplacian).unwrap(), &laplacian, &direct));

    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        run_experiment(&paper_preset(Some(dir.path()))).unwrap();
    }
    let read = |i: usize, name: &str| fs::read(dirs[i].path().join(name)).unwrap();
    let deterministic =
        read(0, PAPER_TRACE_FILE) == read(1, PAPER_TRACE_FILE) && read(0, PAPER_PLOT_FILE) == read(1, PAPER_PLOT_FILE);
    let text = String::from_utf8(read(0, PAPER_TRACE_FILE)).unwrap();
    let round_trip = trace_to_csv(&parse_trace_csv(&text).unwrap()).unwrap() == text;

    let ok = orth <= 1e-12 && norm <= 1e-12 && round_trip && deterministic;
    verdict(
        8,
        "invariant suite",
        ok,
        format!(
            "orthonormality {orth:.2e}, row normalization {norm:.2e}, CSV round trip {round_trip}, reruns identical {deterministic}"
        ),
    );
}
