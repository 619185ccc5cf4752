//! End-to-end runs of the `eberlein` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eberlein::cli::format_scalar;
use eberlein::verification::{known_spectrum_matrix, random_complex};
use eberlein::{Complex64, ComplexMatrix};

fn write_matrix(path: &Path, a: &ComplexMatrix) {
    let text: String = (0..a.n())
        .map(|i| a.row(i).iter().map(|&z| format_scalar(z)).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    fs::write(path, text).unwrap();
}

fn eberlein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eberlein"))
        .args(args)
        .env_remove("EBERLEIN_DEFAULT_TOL")
        .output()
        .unwrap()
}

fn summary_value<'a>(summary: &'a str, key: &str) -> &'a str {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no `{key}` in summary:\n{summary}"))
}

#[test]
fn converged_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &random_complex(6, 12));
    let out = dir.path().join("out");
    let o = eberlein(&[
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--strategy",
        "sg:3",
        "--trace",
        "--eigvecs",
        "--sort",
        "--logabs-every",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["summary.txt", "final_matrix.csv", "eigenvalues.csv", "trace.csv", "transform.csv", "transform_inv.csv", "logabs_0.csv"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "status"), "converged");
    assert_eq!(summary_value(&summary, "strategy"), "sg:3");
    let residual: f64 = summary_value(&summary, "transform_residual").parse().unwrap();
    assert!(residual < 1e-10);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let steps: usize = summary_value(&summary, "steps").parse().unwrap();
    assert_eq!(trace.lines().count(), steps + 1);
    let eig = fs::read_to_string(out.join("eigenvalues.csv")).unwrap();
    assert_eq!(eig.lines().next(), Some("block,mu,re,im"));
    assert_eq!(eig.lines().count(), 7);
}

#[test]
fn exhausted_budget_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &random_complex(8, 4));
    let out = dir.path().join("out");
    let o = eberlein(&["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--max-sweeps", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "status"), "max_sweeps");
    assert_eq!(summary_value(&summary, "sweeps"), "2");
}

#[test]
fn malformed_input_still_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "1,2\n3,x\n").unwrap();
    let out = dir.path().join("out");
    let o = eberlein(&["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "status"), "error");
    assert!(summary_value(&summary, "error").contains("line 2"));
    assert!(!out.join("final_matrix.csv").exists());
}

#[test]
fn real_flag_rejects_complex_entries() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.csv");
    fs::write(&input, "1,2i\n0,1\n").unwrap();
    let out = dir.path().join("out");
    let o = eberlein(&["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--real"]);
    assert_eq!(o.status.code(), Some(1));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "mode"), "real");
    assert_eq!(summary_value(&summary, "status"), "error");
}

#[test]
fn bad_strategy_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &ComplexMatrix::identity(3));
    let o = eberlein(&[
        "--input",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--strategy",
        "zigzag",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zigzag"));
}

#[test]
fn tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &random_complex(4, 2));
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_eberlein"))
        .args(["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("EBERLEIN_DEFAULT_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "tol"), "1e-3");
}

#[test]
fn ordering_file_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &random_complex(3, 9));
    let ordering = dir.path().join("o.txt");
    fs::write(&ordering, "3 3\n2 3\n1 3\n1 2\n").unwrap();
    let out = dir.path().join("out");
    let spec = format!("file:{}", ordering.display());
    let o = eberlein(&["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--strategy", &spec]);
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("pair 2 3\n  pair 1 3\n  pair 1 2"), "{summary}");
}

#[test]
fn conjugate_pairs_with_equal_real_part_form_one_block() {
    let c = Complex64::new;
    let spectrum = [
        c(5.0, 0.0),
        c(4.0, 0.0),
        c(3.0, 0.0),
        c(1.0, 2.0),
        c(1.0, -2.0),
        c(1.0, 1.0),
        c(1.0, -1.0),
        c(-1.0, 0.0),
        c(-2.0, 0.0),
        c(-3.0, 0.0),
    ];
    let (a, _) = known_spectrum_matrix(&spectrum, 1.0, 31).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&input, &a);
    let out = dir.path().join("out");
    let o = eberlein(&["--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--sort"]);
    assert_eq!(o.status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "blocks"), "1,1,1,4,1,1,1");
    assert!(summary.contains("block 4: rows 4-7, size 4"));
}
