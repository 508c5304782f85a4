//! Every subcommand on a pinned seed, checked against golden hashes of
//! its row output.

mod common;

use common::{geotsp, ok, read, sha256, PATH_GRAPH};
use tempfile::TempDir;

fn golden(dir: &std::path::Path, file: &str, expected: &str) {
    let actual = sha256(&dir.join(file));
    assert_eq!(actual, expected, "golden hash of {file}");
}

fn with_graph(n: &str, p: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--n", n, "--d", "2", "--p", p, "--seed", "7", "--out", "g.graph"]);
    dir
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["generate", "--n", "100", "--d", "2", "--p", "0.5", "--seed", "7", "--out"];
    ok(dir.path(), &[&args[..], &["a.graph"]].concat());
    ok(dir.path(), &[&args[..], &["b.graph"]].concat());
    assert_eq!(read(&dir.path().join("a.graph")), read(&dir.path().join("b.graph")));
    assert!(read(&dir.path().join("a.graph")).starts_with("geograph v1 d=2 t=1 n=100 p=0.5 r=none seed=7\n"));
    golden(dir.path(), "a.graph", "edfa539ef526a556b9f48837573eb86cb24acfb982865be13bafa73a5741729d");
}

#[test]
fn geodesic() {
    let dir = with_graph("200", "0.3");
    let run = ok(dir.path(), &["geodesic", "--input", "g.graph", "--source", "0", "--target", "1"]);
    assert!(run.stdout.starts_with("d_X="), "{}", run.stdout);
    golden(dir.path(), "geotsp-out/geodesic.csv", "f914cc34702e2d8498d61bc62d59332879ffaa044f044eac67746118aab8f076");
}

#[test]
fn tour() {
    let dir = with_graph("300", "0.5");
    let run = ok(dir.path(), &["tour", "--input", "g.graph", "--seed", "3"]);
    assert!(run.stdout.starts_with("length="));
    let text = read(&dir.path().join("geotsp-out/tour.txt"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 300);
    golden(dir.path(), "geotsp-out/tour.txt", "87edd34f98e858a4cb0aa808a44e03e18e8276b7e046d6ebd4e24146c090df1a");
}

#[test]
fn exact_and_infeasible() {
    let dir = with_graph("9", "0.7");
    ok(dir.path(), &["exact", "--input", "g.graph"]);
    ok(dir.path(), &["exact", "--input", "g.graph", "--solver", "brute-force", "--out", "bf.txt"]);
    // Both solvers return the optimum; it may be traversed either way.
    let hk = read(&dir.path().join("geotsp-out/exact.txt"));
    let bf = read(&dir.path().join("bf.txt"));
    assert_eq!(hk.lines().last(), bf.lines().last());
    let order = |t: &str| t.lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect::<Vec<_>>();
    let (a, mut b) = (order(&hk), order(&bf));
    if a != b {
        b[1..].reverse();
    }
    assert_eq!(a, b);
    golden(dir.path(), "geotsp-out/exact.txt", "96238047543091f626e6b1b3c081c3c8c98de25694e1518e22cf1b5cae0a0d3f");

    std::fs::write(dir.path().join("path.graph"), PATH_GRAPH).unwrap();
    let run = geotsp(dir.path(), &["exact", "--input", "path.graph"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("INFEASIBLE"), "{}", run.stderr);
}

#[test]
fn scan_threshold() {
    let dir = TempDir::new().unwrap();
    let run = ok(
        dir.path(),
        &["scan-threshold", "--n", "1000", "--omega-grid", "0.5,4", "--pairs", "20", "--trials", "2", "--seed", "5"],
    );
    assert_eq!(run.stdout.lines().filter(|l| l.starts_with("point ")).count(), 2);
    golden(
        dir.path(),
        "geotsp-out/threshold_scan.csv",
        "23ad5173394685d170f4a0ce7daff31df2974be634327cefe856ea6cdd51f4e5",
    );
}

#[test]
fn fit_scaling_is_independent_of_workers() {
    let dir = TempDir::new().unwrap();
    let args = ["fit-scaling", "--n-grid", "256,512,1024,2048", "--p", "0.2", "--trials", "2", "--seed", "11"];
    let one = ok(dir.path(), &[&args[..], &["--workers", "1", "--out-dir", "w1"]].concat());
    let two = ok(dir.path(), &[&args[..], &["--workers", "2", "--out-dir", "w2"]].concat());
    assert_eq!(one.stdout, two.stdout);
    assert!(one.stdout.contains("slope_n="));
    assert_eq!(sha256(&dir.path().join("w1/scaling_fit.csv")), sha256(&dir.path().join("w2/scaling_fit.csv")));
    golden(dir.path(), "w1/scaling_fit.csv", "de1acd0d20d59733f9e9228771602699ad3d9c24b49bbba74a7fd7405f66591b");
}

#[test]
fn estimate_beta() {
    let dir = TempDir::new().unwrap();
    let run = ok(dir.path(), &["estimate-beta", "--n-grid", "128,256,512,1024", "--trials", "3", "--seed", "13"]);
    assert!(run.stdout.contains("beta_hat="));
    golden(
        dir.path(),
        "geotsp-out/estimate_beta.csv",
        "0b1eb1722400f206f45038e91b35ff95474211f0a6464b7a6c39670d4032491a",
    );
}

#[test]
fn verify_lemmas() {
    let dir = TempDir::new().unwrap();
    let run = ok(dir.path(), &["verify-lemmas", "--n-max", "8"]);
    assert!(run.stdout.contains("permutations=46233 violations=0"), "{}", run.stdout);
    golden(
        dir.path(),
        "geotsp-out/verify_permutation_lemma.csv",
        "7cb53991efbb4c80306cd5973606d3d5f32d11a7f1d92ff878a4d172a1518fb8",
    );
}

#[test]
fn concentration() {
    let dir = TempDir::new().unwrap();
    let run = ok(dir.path(), &["concentration", "--blocks", "4,16", "--trials", "500", "--seed", "17"]);
    assert!(run.stdout.contains("strictly_decreasing="));
    golden(
        dir.path(),
        "geotsp-out/concentration_check.csv",
        "61312f5164b8b38f34ec8dfc84778c986a8fde74d199cf87b283c6696322013c",
    );
}

#[test]
fn continuity() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["continuity", "--n", "512", "--delta-grid", "0,0.05,0.1", "--trials", "3", "--seed", "19"]);
    golden(
        dir.path(),
        "geotsp-out/continuity_check.csv",
        "cfc11da58ff77f60fa82bc3e5f0097607cdae8f9f2fff1a805a9042157aac9c1",
    );
}

#[test]
fn json_format_writes_one_file_with_rows() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["verify-lemmas", "--n-max", "4", "--format", "json"]);
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("geotsp-out/verify_permutation_lemma.json"))).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 4);
    assert_eq!(report["parameters"]["run_config"]["n_max"], 4);
    assert!(!dir.path().join("geotsp-out/verify_permutation_lemma.csv").exists());
}
