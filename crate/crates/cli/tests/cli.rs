use std::process::{Command, Output};

use rspin_core::frobenius::Shift;
use rspin_core::strata::decorated::DecoratedClass;
use rspin_core::witten::witten_class;
use serde_json::Value;

fn rspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rspin")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = rspin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn correlator_oracles_agree() {
    let v = json(&["correlator", "--r", "5", "--a", "1,1,3,3"]);
    assert_eq!(v["value"], "1/5");
    assert_eq!(v["oracles_agree"], true);
    assert_eq!(v["schema"], "rspin.correlator/1");
    let v = json(&["correlator", "--r", "3", "--a", "1,1,1,1", "--oracle", "wdvv"]);
    assert_eq!(v["value"], "1/3");
}

#[test]
fn degree_mismatch_is_a_user_error() {
    let out = rspin(&["correlator", "--r", "5", "--a", "3,3,3,3,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree mismatch"));
    assert_eq!(rspin(&["relation", "--r", "4", "--g", "1", "--a", "2", "--d", "0"]).status.code(), Some(1));
    assert_eq!(rspin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rspin(&["--help"]).status.code(), Some(0));
}

#[test]
fn betti_table() {
    let v = json(&["betti", "--g", "10"]);
    let bounds = v["bounds"].as_array().unwrap();
    assert_eq!(bounds[8]["bound"], 1);
    assert_eq!(bounds[9]["bound"], 0);
    assert_eq!(bounds[7]["bound"], 1 + (10 - 3) / 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["witten", "--r", "5", "--g", "1", "--a", "0,0", "--shift", "second"];
    let a = rspin(&args).stdout;
    let b = rspin(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(v.get("version").is_some());
}

#[test]
fn class_round_trips_through_json() {
    let v = json(&["witten", "--r", "6", "--g", "2", "--a", "2", "--shift", "second"]);
    let parsed = DecoratedClass::from_json(&v["class"]).unwrap();
    assert_eq!(parsed, witten_class(6, 2, &[2], Shift::TauSecond).unwrap());
}

#[test]
fn every_command_reports_a_schema() {
    let cmds: Vec<Vec<&str>> = vec![
        vec!["correlator", "--r", "4", "--a", "0,1,1"],
        vec!["fusion", "--r", "5", "--a", "2", "--b", "1"],
        vec!["topft", "--r", "5", "--g", "2", "--a", "1,2"],
        vec!["topft", "--r", "5", "--g", "2", "--a", "1,2", "--method", "trig"],
        vec!["rmatrix", "--r", "4", "--shift", "second", "--order", "2"],
        vec!["pm", "--m", "2"],
        vec!["witten", "--r", "3", "--g", "0", "--a", "0,0,1"],
        vec!["relation", "--r", "3", "--g", "1", "--a", "1", "--d", "1"],
        vec!["relation", "--r", "3", "--g", "2", "--d", "2", "--interior", "--sigma", "1"],
        vec!["betti", "--g", "6", "--d", "3"],
        vec!["verify-ma", "--d", "3"],
        vec!["poly-cert", "--g", "1", "--a", "0"],
        vec!["hol-limit", "--g", "1", "--a", "0"],
        vec!["verify", "--suite", "2,3"],
    ];
    for c in cmds {
        let v = json(&c);
        assert!(v["schema"].as_str().unwrap().starts_with("rspin."), "{c:?}");
    }
}

#[test]
fn truncation_order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rspin"))
        .args(["rmatrix", "--r", "3"])
        .env("RSPIN_TRUNCATION_ORDER", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["R"].as_array().unwrap().len(), 4);
}

#[test]
fn holomorphic_limit_check() {
    let v = json(&["hol-limit", "--g", "2", "--a", "1,1", "--eliminate-kappa1"]);
    assert_eq!(v["check"]["passed"], true);
    let out = rspin(&["hol-limit", "--g", "2", "--a", "2", "--eliminate-kappa1", "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Weierstrass points class: true"));
}

#[test]
fn writes_to_output_file() {
    let dir = std::env::temp_dir().join(format!("rspin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pm.json");
    let out = rspin(&["pm", "--m", "1", "--output", path.to_str().unwrap(), "--threads", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["m"], 1);
    std::fs::remove_dir_all(dir).unwrap();
}
