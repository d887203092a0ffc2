use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn spreadlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn construct_matches_fixtures() {
    for (which, file) in [("A", "extremal_a5.txt"), ("U", "extremal_u5.txt")] {
        let out = spreadlab(&["construct", "--n", "5", "--which", which]);
        assert_eq!(code(&out), 0);
        assert_eq!(out.stdout, std::fs::read(fixture(file)).unwrap(), "{which}");
    }
}

#[test]
fn construct_writes_out_file_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for which in ["A", "U", "N", "M", "S"] {
        let path = dir.path().join(format!("{which}.txt"));
        let out = spreadlab(&[
            "construct",
            "--n",
            "7",
            "--which",
            which,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(out.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = spreadlab_core::io::parse_matrix(&text).unwrap();
        let back = parsed.as_integer().expect("integer matrix");
        assert_eq!(spreadlab_core::io::format_exact(back), text);
    }
    let a = dir.path().join("A.txt");
    let out = spreadlab(&["spectrum", "--file", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["method"], "exact_charpoly");
    // A itself has spectral radius 2(n-1) and spread n.
    assert!((v["spread"].as_f64().unwrap() - 7.0).abs() < 1e-9);
    assert!((v["spectral_radius"].as_f64().unwrap() - 12.0).abs() < 1e-9);
}

#[test]
fn bounds_after_construct_normalizes() {
    let out = spreadlab(&[
        "bounds",
        "--file",
        fixture("extremal_a5.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["normalized"], true);
    assert!((v["spread"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert!((v["bounds"]["two_eigenvalue"].as_f64().unwrap() - 0.625).abs() < 1e-15);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_reports_exact_similarity() {
    let out = spreadlab(&["verify", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["similarity_exact"], true);
    assert_eq!(v["commutators_exact"], true);
}

#[test]
fn bounds_on_diag01() {
    let out = spreadlab(&["bounds", "--file", fixture("diag01.txt").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["spread"].as_f64().unwrap(), 1.0);
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["bounds"]["zero_diagonal"].as_f64().unwrap(), 0.5);
    assert_eq!(v["bounds"]["theorem_piecewise"].as_f64().unwrap(), 1.0);
}

#[test]
fn spectrum_of_witness() {
    let out = spreadlab(&[
        "spectrum",
        "--file",
        fixture("witness3.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let mut re: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[0].as_f64().unwrap())
        .collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re, vec![0.25, 0.25, 1.0]);
    assert_eq!(v["spread"].as_f64().unwrap(), 0.75);
}

#[test]
fn corrupted_report_exits_with_violation_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let out = spreadlab(&[
        "bounds",
        "--file",
        fixture("witness3.txt").to_str().unwrap(),
        "--out",
        good.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = spreadlab(&["bounds", "--report", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    v["spread"] = serde_json::json!(0.5);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = spreadlab(&["bounds", "--report", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let flagged = json(&out)["violations"].clone();
    assert!(flagged
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x == "theorem_piecewise"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BOUND VIOLATION"));
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&spreadlab(&[])), 1);
    assert_eq!(code(&spreadlab(&["construct", "--n", "x"])), 1);
    assert_eq!(code(&spreadlab(&["construct", "--n", "1"])), 1);
    assert_eq!(
        code(&spreadlab(&["construct", "--n", "4", "--which", "Q"])),
        1
    );
    assert_eq!(
        code(&spreadlab(&["bounds", "--file", "/nonexistent/m.txt"])),
        1
    );
    assert_eq!(code(&spreadlab(&["sweep", "--n", "1..3"])), 1);
    assert_eq!(
        code(&spreadlab(&["search", "--n", "3", "--density", "0"])),
        1
    );
    assert_eq!(code(&spreadlab(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let neg = dir.path().join("neg.txt");
    std::fs::write(&neg, "2\n0 -1\n1 0\n").unwrap();
    assert_eq!(
        code(&spreadlab(&["bounds", "--file", neg.to_str().unwrap()])),
        1
    );
    let malformed = dir.path().join("bad.txt");
    std::fs::write(&malformed, "2\n0 1\n1\n").unwrap();
    let out = spreadlab(&["spectrum", "--file", malformed.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let out = spreadlab(&[
        "bounds",
        "--file",
        fixture("nilpotent3.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn search_writes_versioned_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let out = Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args([
            "search",
            "--n",
            "3",
            "--seed",
            "9",
            "--restarts",
            "3",
            "--iters",
            "300",
        ])
        .args(["--method", "anneal", "--out", path.to_str().unwrap()])
        .env("SPREADLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["method"], "anneal");
    assert_eq!(v["red_alert"], false);
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
    let m = spreadlab_core::io::parse_matrix(v["best_matrix"].as_str().unwrap()).unwrap();
    assert_eq!(m.dense.n(), 3);
    assert_eq!(m.dense[(0, 0)], 0.0);
}

#[test]
fn sweep_csv_shape() {
    let out = spreadlab(&[
        "sweep",
        "--n",
        "2..4",
        "--seed",
        "3",
        "--restarts",
        "2",
        "--iters",
        "200",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("format_version,n,"));
    for (i, line) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 9);
        assert_eq!(cols[0], "1");
        assert_eq!(cols[1], (i + 2).to_string());
        let gap: f64 = cols[5].parse().unwrap();
        assert!(gap >= -1e-9);
    }
}
