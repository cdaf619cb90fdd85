//! Runs the built binary on small inputs and checks JSON shape and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaugekit")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self { dir: TempDir::new().unwrap() }
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

fn pair() -> (String, String) {
    (
        fixture("triangle.json").to_string_lossy().into_owned(),
        fixture("pentagon.json").to_string_lossy().into_owned(),
    )
}

#[test]
fn records_have_the_common_shape() {
    let (k, c) = pair();
    for cmd in ["circumradius", "inradius", "cc", "ic", "diameter", "width"] {
        let v = json_of(&run(&[cmd, "--set", &k, "--gauge", &c]));
        for key in ["quantity", "value", "method", "accuracy", "witness"] {
            assert!(v.get(key).is_some(), "{cmd} lacks {key}: {v}");
        }
    }
    let v = json_of(&run(&["circumradius", "--set", &k, "--gauge", &c]));
    assert_eq!(v["witness"]["center"].as_array().unwrap().len(), 2);
}

#[test]
fn gamma_of_a_point() {
    let f = Files::new();
    let c = f.write("box.json", r#"{"vrep": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}"#);
    let v = json_of(&run(&["gamma", "--gauge", &c, "--point", "-3,0.5"]));
    assert_eq!(v["value"].as_f64().unwrap(), 3.0);
}

#[test]
fn top_successive_radius_is_the_circumradius() {
    let (k, c) = pair();
    let r = json_of(&run(&["circumradius", "--set", &k, "--gauge", &c]))["value"].as_f64().unwrap();
    let s = json_of(&run(&["radius", "--set", &k, "--gauge", &c, "--quantity", "R-pi-sup:2"]))["value"]
        .as_f64()
        .unwrap();
    assert!((r - s).abs() < 1e-9);
}

#[test]
fn profile_lists_every_quantity() {
    let (k, c) = pair();
    let v = json_of(&run(&["profile", "--set", &k, "--gauge", &c]));
    let text = v.to_string();
    for name in ["R-pi-sup:1", "r-sigma-inf:2"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn input_errors_exit_with_one() {
    let f = Files::new();
    let (k, c) = pair();
    let junk = f.write("junk.json", "not json");
    let off = f.write("off.json", r#"{"vrep": [[1, 1], [2, 1], [2, 2]]}"#);
    for args in [
        vec!["circumradius", "--set", junk.as_str(), "--gauge", c.as_str()],
        vec!["circumradius", "--set", k.as_str(), "--gauge", off.as_str()],
        vec!["bh", "--set", k.as_str(), "--gauge", c.as_str(), "--lambda", "0.1"],
        vec!["radius", "--set", k.as_str(), "--gauge", c.as_str(), "--quantity", "R-pi-sup:7"],
        vec!["circumradius", "--set", k.as_str()],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn undefined_quantities_exit_with_two() {
    let f = Files::new();
    let seg = f.write("seg.json", r#"{"vrep": [[0, 0], [1, 0]]}"#);
    let (_, c) = pair();
    let out = run(&["radius", "--set", &seg, "--gauge", &c, "--quantity", "r-pi-sup:1"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn infinite_values_are_spelled_out() {
    let f = Files::new();
    let sq = f.write("sq.json", r#"{"vrep": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#);
    let c = f.write("box.json", r#"{"vrep": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}"#);
    let v = json_of(&run(&["profile", "--set", &sq, "--gauge", &c]));
    assert!(!v.to_string().contains("null"), "{v}");
}

#[test]
fn render_draws_bold_hull_and_dashed_translates() {
    let (k, c) = pair();
    let out = run(&["render", "--set", &k, "--gauge", &c, "--lambda", "0.6", "--what", "bh"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains("<svg") && svg.contains("stroke-dasharray"));
    assert!(svg.matches("<polygon").count() >= 3);
}

#[test]
fn verify_reports_named_checks() {
    let (k, c) = pair();
    let v = json_of(&run(&["verify", "--set", &k, "--gauge", &c, "--seed", "4"]));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 25);
    assert!(checks.iter().all(|ch| ch["status"] != "fail"), "{v}");
}

#[test]
fn output_is_reproducible_and_can_go_to_a_file() {
    let f = Files::new();
    let (k, c) = pair();
    let a = f.dir.path().join("a.json");
    let b = f.dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["--out", p.to_str().unwrap(), "verify", "--set", &k, "--gauge", &c, "--seed", "9"]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
