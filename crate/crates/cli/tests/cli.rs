use std::path::Path;
use std::process::{Command, Output};

fn shiftinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftinv"))
        .args(args)
        .output()
        .expect("spawn shiftinv")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn predict_rate_prints_shift_and_rate() {
    let out = shiftinv(&["predict-rate", "--lambda-l", "2", "--lambda-l1", "2.01", "--lambda-n", "4", "--theta", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("resolved: --lambda-l 2 --lambda-l1 2.01 --lambda-n 4 --theta 0.5\n"));
    assert!(text.lines().any(|l| l == "tau = 0.005"));
    assert!(text.lines().any(|l| l == "rate = 0.990049751244"));
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["predict-rate", "--lambda-l", "2", "--lambda-l1", "2.01", "--lambda-n", "4", "--theta", "1.5"],
        &["predict-rate", "--lambda-l", "3", "--lambda-l1", "2", "--lambda-n", "4"],
        &["sweep", "--gaps", ""],
        &["sweep", "--gaps", "-0.1"],
        &["solve", "--diag", "1,2,3", "--l", "3"],
        &["solve"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = shiftinv(args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_exits_zero() {
    let out = shiftinv(&["--help"]);
    assert_eq!(code(&out), 0);
    for sub in ["solve", "predict-rate", "reproduce-paper", "sweep"] {
        assert!(stdout(&out).contains(sub));
    }
}

#[test]
fn single_entry_diagonal_solves() {
    let out = shiftinv(&["solve", "--diag", "5", "--l", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("lambda_1 = 5"));
}

#[test]
fn solve_echoes_resolved_flags() {
    let out = shiftinv(&["solve", "--laplacian", "6", "--l", "2", "--inner", "direct", "--shift", "fixed:0"]);
    assert_eq!(code(&out), 0);
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert_eq!(
        first,
        "resolved: --laplacian 6 --l 2 --inner direct --theta 0.5 --inner-steps 1 --shift fixed:0 --max-outer 500 --tol 1e-10 --seed 0"
    );
}

#[test]
fn non_convergence_exits_two() {
    let out = shiftinv(&["solve", "--diag", "1,2,2.01,4", "--l", "2", "--max-outer", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn io_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let f = file.to_str().unwrap();
    assert_eq!(code(&shiftinv(&["reproduce-paper", "--out-dir", f])), 3);
    assert_eq!(code(&shiftinv(&["sweep", "--gaps", "1", "--out-dir", f])), 3);
    let missing = dir.path().join("missing.mtx");
    assert_eq!(code(&shiftinv(&["solve", "--matrix", missing.to_str().unwrap()])), 3);
}

#[test]
fn reproduce_paper_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("nested/out");
    let out = shiftinv(&["reproduce-paper", "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "tau = 0.005"));
    assert!(text.contains("measured rate = "));
    assert!(out_dir.join("paper_trace.csv").is_file());
    assert!(out_dir.join("paper_fig1.svg").is_file());
}

#[test]
fn sweep_writes_one_row_per_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = shiftinv(&["sweep", "--gaps", "1,0.1,0.01", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(Path::new(dir.path()).join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(dir.path().join("sweep.svg").is_file());
}

#[test]
fn solve_with_balancing_shift_reports_tau() {
    let out = shiftinv(&[
        "solve", "--diag", "1,2,2.01,4", "--l", "2", "--inner", "richardson", "--theta", "0.5", "--shift",
        "optimal:2.01,4", "--max-outer", "500", "--seed", "0", "--truth",
    ]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "tau = 0.005"));
    assert!(text.contains("predicted rate = 0.990049751244"));
}

#[test]
fn predict_rate_zero_numerator() {
    let out = shiftinv(&["predict-rate", "--lambda-l", "0", "--lambda-l1", "1", "--lambda-n", "1", "--theta", "0.5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l == "rate = 0"));
}
