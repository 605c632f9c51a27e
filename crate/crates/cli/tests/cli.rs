use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transcert")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn bound_over_rationals() {
    let out = run(&["bound", "--field", &fixture("q_one.json"), "--degree", "1", "--height", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["command"], "bound");
    assert_eq!(r["S"], 6);
    assert_eq!(r["N"], 6);
    assert_eq!(r["log10_bound"], "-4.76562e83");
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn bound_over_sqrt2() {
    let out = run(&["bound", "--field", &fixture("sqrt2_pair.json"), "--degree", "1", "--height", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["S"], 48);
}

#[test]
fn invalid_and_dependent_inputs() {
    let out = run(&["bound", "--field", &fixture("malformed.json"), "--degree", "1", "--height", "1"]);
    assert_eq!(code(&out), 2);
    assert!(report(&out)["error"].is_string());
    let out = run(&["audit", "--field", &fixture("sqrt2_dependent.json"), "--degree", "1", "--height", "1"]);
    assert_eq!(code(&out), 3);
    let out = run(&["bound", "--field", &fixture("q_one.json"), "--degree", "1", "--height", "x"]);
    assert_eq!(code(&out), 2);
    let out = run(&["bound", "--field", &fixture("missing.json"), "--degree", "1", "--height", "1"]);
    assert_eq!(code(&out), 2);
    let out = run(&["verify", "--field", &fixture("sqrt2_pair.json"), "--poly", &fixture("x1_minus_3x0.json")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_reports() {
    let out = run(&["verify", "--field", &fixture("q_one.json"), "--poly", &fixture("x1_minus_3x0.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["verdict"], "consistent");
    assert!(r["rho"].as_str().unwrap().starts_with("0.09390605718"));
    assert!(r["rho_width_log2"].as_i64().unwrap() < -60);
    let out = run(&["verify", "--field", &fixture("sqrt2_pair.json"), "--poly", &fixture("x1x2_minus_7x0sq.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["verdict"], "consistent");
    // |e (1 + 2 sqrt 2) - 7| / 7
    assert!(r["rho"].as_str().unwrap().starts_with("0.59728196579"));
}

#[test]
fn construct_statuses() {
    let out = run(&["construct", "--field", &fixture("q_one.json"), "--S", "2", "--T", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["family_size"], 6);
    assert_eq!(r["lem_a"]["passed"], true);
    assert!(r["prop_q"]["status"].as_str().unwrap().starts_with("out of hypothesis"));
    assert_eq!(r["zero_lemma"]["status"], "certified");
    let out = run(&["construct", "--field", &fixture("q_one.json"), "--S", "6", "--T", "6"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["prop_q"]["status"], "checked");
    assert_eq!(r["prop_q"]["pairs"], 42);
    assert_eq!(r["prop_q"]["passed"], true);
    let out = run(&["construct", "--field", &fixture("sqrt2_pair.json"), "--S", "2", "--T", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["zero_lemma"]["status"], "certified");
}

#[test]
fn audit_passes() {
    let out = run(&["audit", "--field", &fixture("sqrt2_pair.json"), "--degree", "2", "--height", "1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["chain"].as_array().unwrap().len(), 30);
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn resultant_values() {
    let out = run(&["resultant", "--poly", &fixture("lin_a.json"), "--poly", &fixture("lin_b.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["value"], "3");
    let out = run(&["resultant", &fixture("lin_b.json"), &fixture("lin_a.json")]);
    assert_eq!(code(&out), 0);
    let v = report(&out)["value"].as_str().unwrap().to_string();
    assert!(v == "3" || v == "-3");
    let out = run(&["resultant", "--poly", &fixture("lin_a.json")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reruns_are_identical() {
    let args = ["verify", "--field", &fixture("sqrt2_pair.json"), "--poly", &fixture("x1x2_minus_7x0sq.json"), "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["construct", "--field", &fixture("sqrt2_pair.json"), "--S", "2", "--T", "2", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("transcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bound.json");
    let p = path.display().to_string();
    let out = run(&["bound", "--field", &fixture("q_one.json"), "--degree", "1", "--height", "3", "--out", &p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["log10_bound"], "-4.76562e83");
    assert_eq!(r["config"]["prec"], 128);
    std::fs::remove_dir_all(&dir).unwrap();
}
