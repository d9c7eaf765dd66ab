use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walgebra")).args(args).output().expect("binary runs")
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("walgebra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_sl2_passes_with_virasoro_check() {
    let out = run(&["verify", "--algebra", spec("sl2_principal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out.stdout);
    assert_eq!(v["schema"], "walgebra/1");
    assert_eq!(v["report"]["all_passed"], true);
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"].as_str().unwrap().starts_with("virasoro: w(f) is Virasoro") && c["passed"] == true));
}

#[test]
fn kostant_table_is_zero() {
    let out = run(&["finite-bracket", "--algebra", spec("sl3_principal.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|e| e["z_poly"].as_array().unwrap().is_empty()));
}

#[test]
fn malformed_spec_names_the_field() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"type":"sl","n":3,"nilpotent":{"partition":[2,"x"]}}"#).unwrap();
    let out = run(&["setup", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = json(&out.stderr);
    assert_eq!(err["error"], "parse-error");
    assert_eq!(err["field"], "nilpotent.partition[1]");
}

#[test]
fn missing_algebra_is_an_error_record() {
    let out = run(&["generators"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["field"], "--algebra");
}

#[test]
fn bad_flag_is_an_error_record() {
    let out = run(&["lambda-bracket", "--route", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["kind"], "error");
}

#[test]
fn zeta_outside_centralizer_is_rejected() {
    // f does not commute with e
    let out = run(&["lambda-bracket", "--algebra", spec("sl2_principal.json").to_str().unwrap(), "--zeta", "0,1,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stderr)["error"], "invalid-input");
}

#[test]
fn zeta_deformation_reports_shift() {
    let out = run(&["lambda-bracket", "--algebra", spec("sl2_principal.json").to_str().unwrap(), "--zeta", "3,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["route"], "closed-zeta");
    assert_eq!(v["report"]["all_passed"], true);
}

#[test]
fn routes_agree_and_output_is_deterministic() {
    let sp = spec("sl3_minimal.json");
    let a = scratch("routes1.json");
    let b = scratch("routes4.json");
    for (jobs, path) in [("1", &a), ("4", &b)] {
        let out = run(&["lambda-bracket", "--algebra", sp.to_str().unwrap(), "--route", "all", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(json(&ta)["report"]["all_passed"], true);
}

#[test]
fn rational_z_evaluates() {
    let out = run(&["lambda-bracket", "--algebra", spec("sl2_principal.json").to_str().unwrap(), "--z", "1/2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "{w1 λ w1} = (-1/2)*λ^3 + (1 + 2*w1)*λ + w1'");
}

#[test]
fn custom_spec_matches_builtin() {
    let a = run(&["generators", "--algebra", spec("sl2_custom.json").to_str().unwrap()]);
    let b = run(&["generators", "--algebra", spec("sl2_principal.json").to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a.stdout)["generators"][0]["w"], json(&b.stdout)["generators"][0]["w"]);
}

#[test]
fn zhu_and_miura_succeed() {
    for cmd in ["zhu", "miura"] {
        let out = run(&[cmd, "--algebra", spec("sl3_minimal.json").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        assert_eq!(json(&out.stdout)["report"]["all_passed"], true);
    }
}
