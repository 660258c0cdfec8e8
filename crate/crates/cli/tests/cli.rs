use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wavecauchy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavecauchy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn body(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn constants_table_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ini", "[run]\ndims = 2, 3, 4, 5\n");
    let out = wavecauchy(&["constants", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body(&String::from_utf8(out.stdout).unwrap());
    let product = |name: &str| -> f64 { rows.iter().find(|r| r[1] == name).unwrap()[2].parse().unwrap() };
    assert_eq!(product("c_3"), 1.0);
    assert!((product("c_5") - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(product("d_2"), 0.5);
    assert_eq!(product("d_4"), 0.125);
}

#[test]
fn constant_velocity_solve_gives_t() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.ini",
        "[run]\ndim = 3\n[data]\nphi = zero\npsi = constant(1)\n[probes]\npoints = 0 0 0, 0.5 -1 2\n[times]\nt = 2\n",
    );
    let report = dir.path().join("out.csv");
    let out = wavecauchy(&["solve", "--config", &cfg, "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = body(&fs::read_to_string(&report).unwrap());
    assert_eq!(rows[0][..5], ["x1", "x2", "x3", "t", "u"]);
    for row in &rows[1..] {
        assert!((row[4].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(row[row.len() - 2], "pass");
    }
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ini", "");
    let out = wavecauchy(&["constants", "--config", &cfg, "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fail,relative_disagreement"));
}

#[test]
fn invalid_config_names_the_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.ini", "[run]\ndim = 3\n[times]\nt = 0\n[data]\npsi = sinc(2)\n");
    let out = wavecauchy(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("times.t") && err.contains("data.psi"), "{err}");

    let cfg = write(dir.path(), "other.ini", "[run]\ncommand = constants\n");
    assert_eq!(wavecauchy(&["solve", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn converge_with_two_levels_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ini", "[converge]\ntarget = wave-residual\nlevels = 0.1, 0.05\n");
    let out = wavecauchy(&["converge", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("usage error"));
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "i.ini",
        "[run]\ndims = 3, 4\n[identities]\ndraws = 10\n",
    );
    let run = |seed: &str, name: &str| {
        let path = dir.path().join(name);
        let out = wavecauchy(&["verify-identities", "--config", &cfg, "--seed", seed, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        fs::read(path).unwrap()
    };
    let a = run("5", "a.csv");
    assert_eq!(a, run("5", "b.csv"));
    assert_ne!(a, run("6", "c.csv"));
}

#[test]
fn help_documents_columns() {
    let out = wavecauchy(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["verify-reduction", "error_estimate", "check, measured, relation, bound, status, violated", "--quad-nodes"] {
        assert!(text.contains(needle), "{needle}");
    }
}
