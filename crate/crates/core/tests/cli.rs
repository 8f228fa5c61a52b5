mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;
use matmean::cli::{parse_matrix_file, write_matrix_file, MatrixKind};
use matmean::linalg::random_hermitian;

const PAULI_FILE: &str = "# sigma_z and sigma_x
n 2 hermitian
1 0
0 -1

0 1
1 0
";

fn matmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matmean"))
        .args(args)
        .env_remove("MATMEAN_SEED")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_with_zero_trials_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = matmean(&["verify", "--trials", "0", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["total_checks"], 0);
    assert_eq!(json["total_violations"], 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
}

#[test]
fn verify_is_reproducible_across_runs_and_jobs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let common = [
        "verify", "--trials", "8", "--n", "3", "--seed", "7", "--t-grid", "-1:2:0.5",
    ];
    let run = |dir: &Path, jobs: &str| {
        let mut args = common.to_vec();
        args.extend(["--out", path(dir), "--jobs", jobs]);
        let out = matmean(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout)
            .unwrap()
            .replace(path(dir), "OUT")
    };
    let sa = run(a.path(), "1");
    let sb = run(b.path(), "4");
    assert_eq!(sa, sb);
    for f in ["report.json", "report.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = |d: &Path| {
        vec![
            "verify".to_string(),
            "--trials".into(),
            "2".into(),
            "--checks".into(),
            "theorem2".into(),
            "--out".into(),
            path(d).into(),
        ]
    };
    let bin = env!("CARGO_BIN_EXE_matmean");
    let status = Command::new(bin)
        .args(args(a.path()))
        .env("MATMEAN_SEED", "5")
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let status = Command::new(bin)
        .args(args(b.path()))
        .args(["--seed", "5"])
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert_eq!(
        fs::read(a.path().join("report.json")).unwrap(),
        fs::read(b.path().join("report.json")).unwrap()
    );
}

#[test]
fn check_pair_on_pauli_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pauli.txt");
    fs::write(&file, PAULI_FILE).unwrap();
    let out = matmean(&[
        "check-pair",
        path(&file),
        "--checks",
        "golden_thompson,theorem2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("golden_thompson"));
    assert!(stdout.contains("PASS"));
}

#[test]
fn check_pair_on_zero_scalars() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero.txt");
    fs::write(&file, "n 1 hermitian\n0\n\n0\n").unwrap();
    let out = matmean(&["check-pair", path(&file), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["total_violations"], 0);
}

#[test]
fn malformed_files_exit_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.txt");
    fs::write(&short, "n 2 hermitian\n1 0\n0\n\n0 1\n1 0\n").unwrap();
    let out = matmean(&["check-pair", path(&short)]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("line 3") && stderr.contains("row 2"),
        "{stderr}"
    );

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(
        matmean(&["check-pair", path(&empty)]).status.code(),
        Some(2)
    );
    assert!(parse_matrix_file("").is_err());

    let missing = dir.path().join("missing.txt");
    assert_eq!(
        matmean(&["check-pair", path(&missing)]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_arguments_exit_with_error() {
    assert_eq!(
        matmean(&["verify", "--trials", "-3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        matmean(&["verify", "--checks", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(matmean(&["sweep", "--t-step", "0"]).status.code(), Some(2));
    assert_eq!(matmean(&["--help"]).status.code(), Some(0));
}

#[test]
fn matrix_files_round_trip_exactly() {
    let h = random_hermitian(4, 1.0, &mut rng(1));
    let k = random_hermitian(4, 1.0, &mut rng(2));
    let text = write_matrix_file(h.as_matrix(), k.as_matrix(), MatrixKind::Hermitian);
    let parsed = parse_matrix_file(&text).unwrap();
    assert_eq!(parsed.h.as_matrix(), h.as_matrix());
    assert_eq!(parsed.k.as_matrix(), k.as_matrix());
}

#[test]
fn sweep_writes_requested_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = matmean(&[
        "sweep",
        "--pairs",
        "2",
        "--format",
        "csv",
        "--t-step",
        "0.5",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("sweep_1.csv")).unwrap();
    assert!(csv.starts_with("t,trace_geom_mean,trace_exp_sum,trace_product,regime\n"));
    assert_eq!(csv.lines().count(), 14);
    assert!(dir.path().join("sweep_2.csv").exists());
    assert!(!dir.path().join("sweep_1.svg").exists());
}
