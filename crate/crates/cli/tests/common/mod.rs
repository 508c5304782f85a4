#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary in `dir` with a clean seed environment.
pub fn geotsp(dir: &Path, args: &[&str]) -> Run {
    geotsp_with_env(dir, args, &[])
}

pub fn geotsp_with_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_geotsp"));
    cmd.current_dir(dir).args(args).env_remove("GEOTSP_SEED").env_remove("RUST_LOG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn ok(dir: &Path, args: &[&str]) -> Run {
    let run = geotsp(dir, args);
    assert_eq!(run.code, 0, "{args:?} failed:\n{}", run.stderr);
    run
}

pub fn sha256(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// A 5-vertex path: connected but without a Hamilton cycle.
pub const PATH_GRAPH: &str = "geograph v1 d=2 t=1 n=5 p=1 r=none seed=0
0.1 0.1
0.3 0.2
0.5 0.4
0.7 0.6
0.9 0.9
0 1
1 2
2 3
3 4
";
