//! Exit codes, configuration precedence and the seed environment variable.

mod common;

use common::{geotsp, geotsp_with_env, ok, read};
use tempfile::TempDir;

fn header(dir: &std::path::Path, file: &str) -> String {
    read(&dir.join(file)).lines().next().unwrap().to_owned()
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let run = geotsp(dir.path(), &["generate", "--n", "5", "--bogus"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("Usage"), "{}", run.stderr);
    assert_eq!(geotsp(dir.path(), &["frobnicate"]).code, 2);
    assert_eq!(geotsp(dir.path(), &["generate"]).code, 2, "missing --n");
    assert_eq!(geotsp(dir.path(), &["generate", "--n", "5", "--p", "1.5"]).code, 2, "p out of range");
    assert_eq!(geotsp(dir.path(), &["verify-lemmas", "--n-max", "12"]).code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let dir = TempDir::new().unwrap();
    let run = ok(dir.path(), &["--help"]);
    for sub in [
        "generate",
        "geodesic",
        "tour",
        "exact",
        "scan-threshold",
        "fit-scaling",
        "estimate-beta",
        "verify-lemmas",
        "concentration",
        "continuity",
    ] {
        assert!(run.stdout.contains(sub), "help lists {sub}");
    }
    ok(dir.path(), &["--version"]);
}

#[test]
fn operation_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let run = geotsp(dir.path(), &["geodesic", "--input", "missing.graph", "--source", "0", "--target", "1"]);
    assert_eq!(run.code, 1);
    std::fs::write(dir.path().join("bad.graph"), "not a graph\n").unwrap();
    assert_eq!(geotsp(dir.path(), &["tour", "--input", "bad.graph"]).code, 1);
    let run = geotsp(dir.path(), &["fit-scaling", "--n-grid", "1024", "--trials", "1"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("degenerate fit"), "{}", run.stderr);
    // A graph with a degree-one vertex has no tour.
    std::fs::write(dir.path().join("path.graph"), common::PATH_GRAPH).unwrap();
    let run = geotsp(dir.path(), &["tour", "--input", "path.graph", "--method", "posa-reduce"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("FAILURE"));
}

#[test]
fn flags_beat_config_beat_env_and_defaults() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"n": 30, "p": 0.25, "seed": 9, "out": "cfg.graph"}"#).unwrap();
    ok(dir.path(), &["generate", "--config", "c.json", "--n", "12"]);
    assert_eq!(header(dir.path(), "cfg.graph"), "geograph v1 d=2 t=1 n=12 p=0.25 r=none seed=9");

    let run = geotsp_with_env(dir.path(), &["generate", "--config", "c.json"], &[("GEOTSP_SEED", "4")]);
    assert_eq!(run.code, 0);
    assert_eq!(header(dir.path(), "cfg.graph"), "geograph v1 d=2 t=1 n=30 p=0.25 r=none seed=9");

    let run = geotsp_with_env(dir.path(), &["generate", "--n", "3", "--out", "env.graph"], &[("GEOTSP_SEED", "4")]);
    assert_eq!(run.code, 0);
    assert_eq!(header(dir.path(), "env.graph"), "geograph v1 d=2 t=1 n=3 p=1 r=none seed=4");

    ok(dir.path(), &["generate", "--n", "3", "--out", "default.graph"]);
    assert!(header(dir.path(), "default.graph").ends_with("seed=1"));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["concentration", "--blocks", "4,9", "--trials", "50", "--seed", "21", "--out-dir", "first"]);
    let echo = dir.path().join("first/concentration.config.json");
    ok(dir.path(), &["concentration", "--config", echo.to_str().unwrap(), "--out-dir", "second"]);
    assert_eq!(
        read(&dir.path().join("first/concentration_check.csv")),
        read(&dir.path().join("second/concentration_check.csv"))
    );
    let side: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("first/concentration_check.json"))).unwrap();
    assert_eq!(side["parameters"]["run_config"]["blocks"], serde_json::json!([4, 9]));
    assert_eq!(side["parameters"]["run_config"]["subcommand"], "concentration");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(geotsp(dir.path(), &["generate", "--n", "5", "--config", "bad.json"]).code, 2);
    std::fs::write(dir.path().join("unknown.json"), r#"{"colour": "red"}"#).unwrap();
    assert_eq!(geotsp(dir.path(), &["generate", "--n", "5", "--config", "unknown.json"]).code, 2);
    assert_eq!(geotsp(dir.path(), &["generate", "--n", "5", "--config", "absent.json"]).code, 2);
}
