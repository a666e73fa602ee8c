//! Black-box behavior of the `vandal` binary: formats, exit codes, and
//! reproducibility.

use std::process::Command;

fn vandal() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vandal"))
}

#[test]
fn gen_then_spectrum_round_trip() {
    let dir = std::env::temp_dir().join("vandal-cli-test-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let nodes = dir.join("nodes.json");

    let out = vandal()
        .args(["gen", "equispaced", "--m", "3", "--d", "1"])
        .args(["--out", nodes.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("separation"), "stderr: {stderr}");

    let out = vandal()
        .args(["spectrum", "--nodes", nodes.to_str().unwrap(), "--n", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cond = parsed["cond"].as_f64().unwrap();
    assert!((cond - 1.0).abs() < 1e-10, "cond = {cond}");
    assert_eq!(parsed["path"], "gram");
}

#[test]
fn text_node_files_are_accepted() {
    let dir = std::env::temp_dir().join("vandal-cli-test-text");
    std::fs::create_dir_all(&dir).unwrap();
    let nodes = dir.join("nodes.txt");
    std::fs::write(&nodes, "0.0\n0.5\n").unwrap();

    let out = vandal()
        .args(["spectrum", "--nodes", nodes.to_str().unwrap(), "--n", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((parsed["cond"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn bound_all_emits_one_row_per_theorem() {
    let out = vandal()
        .args(["bound", "--q", "0.1", "--n", "32", "--d", "1", "--theorem", "all"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = parsed.as_array().unwrap();
    let names: Vec<&str> = rows
        .iter()
        .map(|r| r["theorem"].as_str().unwrap())
        .collect();
    for expected in [
        "separated_d1_min",
        "separated_max",
        "ingham",
        "small_r",
        "cluster_specialization",
        "kernel",
        "kernel_zeta",
    ] {
        assert!(names.contains(&expected), "missing {expected} in {names:?}");
    }
}

#[test]
fn ingham_threshold_example() {
    // q(N−1) = 1.98 is below the d = 1 threshold 14/π
    let out = vandal()
        .args(["bound", "--q", "0.02", "--n", "100", "--d", "1", "--theorem", "ingham"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &parsed.as_array().unwrap()[0];
    assert_eq!(row["applicable"], false);
    assert!((row["condition_lhs"].as_f64().unwrap() - 1.98).abs() < 1e-12);
}

#[test]
fn unknown_theorem_exits_with_usage_error() {
    let out = vandal()
        .args(["bound", "--q", "0.1", "--n", "8", "--d", "1", "--theorem", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_cap_exit_code() {
    let dir = std::env::temp_dir().join("vandal-cli-test-cap");
    std::fs::create_dir_all(&dir).unwrap();
    let nodes = dir.join("nodes.txt");
    std::fs::write(&nodes, "0.1\n0.3\n").unwrap();

    let out = vandal()
        .args(["--explicit-cap", "10"])
        .args(["spectrum", "--nodes", nodes.to_str().unwrap(), "--n", "8", "--cross-check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_seed_gives_identical_output() {
    let run = || {
        vandal()
            .args(["sweep", "--vary", "q", "--n", "16", "--d", "1", "--m", "2"])
            .args(["--steps", "5", "--seed", "42", "--format", "csv"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables_which_1_lists_quoted_rows_as_not_evaluable() {
    let out = vandal()
        .args(["tables", "--which", "1", "--d", "3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let quoted: Vec<&serde_json::Value> = rows
        .iter()
        .filter(|r| r["evaluable"] == false)
        .collect();
    assert_eq!(quoted.len(), 2);
    for row in quoted {
        assert!(row.get("normalized_bound").is_none());
    }
}

#[test]
fn invalid_threads_env_rejected() {
    let out = vandal()
        .env("VANDAL_THREADS", "zero")
        .args(["tables", "--which", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
