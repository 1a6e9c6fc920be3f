use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fsig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn shipped_problems_exit_zero() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = fsig(&["fsig", arg(&path), "--emax", "2"]);
        assert_eq!(out.status.code(), Some(0), "{}", path.display());
    }
}

#[test]
fn failed_expectation_exits_two() {
    let path = scratch(
        "wrong.toml",
        "[ring]\np = 5\nvars = [\"x\", \"y\", \"z\"]\nquotient = \"x*y - z^2\"\n\n[task.expect]\nfsig = \"1/3\"\n",
    );
    let out = fsig(&["fsig", arg(&path), "--emax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}

#[test]
fn bad_input_exits_one_with_error_document() {
    let path = scratch("bad.toml", "[ring]\np = 4\nvars = [\"x\"]\n");
    let out = fsig(&["fsig", arg(&path)]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert!(doc["error"].is_string());
    assert_eq!(doc["partial"], true);

    let path = scratch("typo.toml", "[ring]\np = 5\nvars = [\"x\"]\nquotinet = \"x\"\n");
    assert_eq!(fsig(&["fsig", arg(&path)]).status.code(), Some(1));
    assert_eq!(fsig(&["fsig", "/nonexistent/problem.toml"]).status.code(), Some(1));
}

#[test]
fn missing_divisor_is_an_input_error() {
    let out = fsig(&["curve", &problem("regular-p5-n1.toml")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let run = || {
        let mut doc = json(&fsig(&["adjoint-check", &problem("an-p7-n2.toml"), "--emax", "2"]));
        doc.as_object_mut().unwrap().remove("timing");
        doc
    };
    assert_eq!(run(), run());
    let a = fsig(&["curve", &problem("an-p5-n1.toml"), "--format", "csv"]);
    let b = fsig(&["curve", &problem("an-p5-n1.toml"), "--format", "csv", "--threads", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_curve_is_monotone() {
    let out = fsig(&["curve", &problem("an-p5-n1.toml"), "--emax", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,e,q,t,length,value,value_decimal"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    for e in ["1", "2"] {
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| r[1] == e)
            .map(|r| r[6].parse().unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    }
}

#[test]
fn selftest_passes() {
    let out = fsig(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().len() >= 5);
}
