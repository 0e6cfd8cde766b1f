use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn udl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udl"))
        .args(args)
        .env_remove("UDL_STEP_BUDGET")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_report_matches_golden() {
    let out = udl(&["verify", "--n", "100", "--k-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("verify_n100_k3.json"));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["edge_count"], 288);
    assert_eq!(report["params"]["r"], 2);
    let checks = report["bound_checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    assert!(checks.iter().all(|c| c["pass"] == true && c["lhs"].is_number() && c["rhs"].is_number()));
}

#[test]
fn verify_default_k_max_passes() {
    assert_eq!(udl(&["verify", "--n", "100"]).status.code(), Some(0));
}

#[test]
fn worker_count_does_not_change_output() {
    let a = udl(&["verify", "--n", "400", "--k-max", "3", "--workers", "1"]);
    let b = udl(&["verify", "--n", "400", "--k-max", "3", "--workers", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_changes_only_sampled_parts() {
    let a: Value = serde_json::from_slice(&udl(&["verify", "--n", "400", "--seed", "0"]).stdout).unwrap();
    let b: Value = serde_json::from_slice(&udl(&["verify", "--n", "400", "--seed", "7"]).stdout).unwrap();
    assert_eq!(a["seed"], 0);
    assert_eq!(b["seed"], 7);
    assert_eq!(a["edge_count"], b["edge_count"]);
    assert_eq!(a["path_stats"][0]["total_paths"], b["path_stats"][0]["total_paths"]);
}

#[test]
fn degenerate_configuration_restricts_checks() {
    let out = udl(&["verify", "--n", "10", "--k-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["params"]["m"], 1);
    let skipped: Vec<&str> = report["skipped"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert!(skipped.contains(&"rank_window"));
    assert!(skipped.contains(&"edge_directions_in_group"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--n", "3"][..],
        &["verify", "--n", "100", "--k-max", "7"],
        &["verify", "--n", "100", "--bogus"],
        &["frobnicate"],
        &["graph", "--points", "pts.txt"],
        &["chebyshev", "--n", "10", "--d", "4", "--a", "2"],
        &[],
    ] {
        let out = udl(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    let out = udl(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify"));
}

#[test]
fn reps_prints_sixteen_points() {
    let out = udl(&["reps", "--m", "65"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("reps_m65.txt"));
    for line in stdout(&out).lines() {
        let v: Vec<i64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(v[0] * v[0] + v[1] * v[1], 65);
    }
    assert_eq!(stdout(&udl(&["reps", "--m", "3"])), "");
    assert_eq!(stdout(&udl(&["reps", "--m", "25"])).lines().count(), 12);
}

#[test]
fn graph_emits_sorted_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edges.txt");
    let out = udl(&["graph", "--n", "100", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<i64>> = text
        .lines()
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 288);
    assert!(rows.windows(2).all(|w| w[0] < w[1]));
    for r in &rows {
        assert_eq!((r[2] - r[0]).pow(2) + (r[3] - r[1]).pow(2), 5);
    }
}

#[test]
fn graph_reads_point_files() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "# unit square\n0 0\n0 1\n1 0\n\n1 1\n").unwrap();
    let out = udl(&["graph", "--points", pts.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["edge_count"], 4);

    std::fs::write(&pts, "0 0\n0 0\n").unwrap();
    assert_eq!(udl(&["graph", "--points", pts.to_str().unwrap(), "--m", "1"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(udl(&["graph", "--points", missing.to_str().unwrap(), "--m", "1"]).status.code(), Some(2));
}

#[test]
fn config_round_trips_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.txt");
    let out = udl(&["config", "--n", "400", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["params"]["m"], 65);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 400);
    let g = udl(&["graph", "--points", path.to_str().unwrap(), "--m", "65"]);
    let summary: Value = serde_json::from_slice(&g.stdout).unwrap();
    assert_eq!(summary["edge_count"], 1744);
}

#[test]
fn step_budget_refuses_large_jobs() {
    let out = udl(&["paths", "--n", "400", "--k", "3", "--step-budget", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    let out = Command::new(env!("CARGO_BIN_EXE_udl"))
        .args(["verify", "--n", "100"])
        .env("UDL_STEP_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_udl"))
        .args(["verify", "--n", "100", "--step-budget", "1000000"])
        .env("UDL_STEP_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_udl"))
        .args(["verify", "--n", "100"])
        .env("UDL_STEP_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paths_reports_counts_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.txt");
    let out = udl(&["paths", "--n", "100", "--k", "2", "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["total_paths"], 3128);
    let total: u64 = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit(' ').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 3128);
}

#[test]
fn chebyshev_and_bounds_outputs() {
    let out = udl(&["chebyshev", "--n", "10"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pi"], 1.0);
    assert!((v["psi"].as_f64().unwrap() - (5f64.ln() + 3f64.ln())).abs() < 1e-12);

    let out = udl(&["bounds", "--n", "10000", "--k-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("bounds_n10000.csv"));
    assert_eq!(udl(&["bounds", "--n", "10000", "--k-max", "1"]).status.code(), Some(2));
    assert_eq!(udl(&["bounds", "--n", "100", "--epsilon", "0"]).status.code(), Some(2));
}
