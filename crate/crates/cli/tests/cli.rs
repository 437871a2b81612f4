use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use crosslab::io::{write_json, InvolutionSpec};
use crosslab::symmetry::{klr_involution, klr_matrix};
use crosslab::tensor::{flip, I};
use crosslab::Involution;
use serde_json::Value;

fn crosslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosslab"))
        .args(args)
        .env_remove("CROSSLAB_TOL")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn all_passed(report: &Value) -> bool {
    let checks = report["checks"].as_array().expect("checks array");
    !checks.is_empty()
        && checks
            .iter()
            .all(|c| c["passed"] == Value::Bool(true) || c["informational"] == Value::Bool(true))
}

fn conjugation_file(name: &str, n: usize) -> PathBuf {
    let p = scratch(name);
    write_json(&p, &InvolutionSpec::of(&Involution::conjugation(n))).unwrap();
    p
}

#[test]
fn flip_passes_every_suite() {
    let t = scratch("flip.json");
    write_json(&t, &flip(2)).unwrap();
    let s = conjugation_file("conj2.json", 2);
    let out = crosslab(&["verify", path_str(&t), path_str(&s), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(all_passed(&json(&out)));
}

#[test]
fn i_flip_is_not_crossing_symmetric() {
    let t = scratch("iflip.json");
    write_json(&t, &flip(2).scale(I)).unwrap();
    let s = conjugation_file("conj2b.json", 2);
    let out = crosslab(&["verify", path_str(&t), path_str(&s), "--suite", "crossing-basic"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn klr_with_its_involution() {
    let t = scratch("klr.json");
    write_json(&t, klr_matrix().mat()).unwrap();
    let s = scratch("klr_s.json");
    write_json(&s, &InvolutionSpec::of(&klr_involution(2.0).unwrap())).unwrap();
    let out = crosslab(&["verify", path_str(&t), path_str(&s), "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn group_functions_have_dimension_order() {
    let spec = scratch("cz2.json");
    std::fs::write(&spec, r#"{"group-functions": "Z2"}"#).unwrap();
    let out = crosslab(&["qsystem", path_str(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("special true (d = 2.000000)"), "{stderr}");
}

#[test]
fn unequal_inverse_traces_are_not_special() {
    let spec = scratch("mm.json");
    std::fs::write(
        &spec,
        r#"{"multimatrix": {"blocks": [1, 2], "rho": [
            {"rows": 1, "cols": 1, "data": [[0.5, 0.0]]},
            {"rows": 2, "cols": 2, "data": [[0.25, 0.0], [0.0, 0.0], [0.0, 0.0], [0.25, 0.0]]}
        ]}}"#,
    )
    .unwrap();
    let out = crosslab(&["qsystem", path_str(&spec), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let special = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "qsystem.special")
        .expect("special is reported");
    assert_eq!(special["passed"], Value::Bool(false));
}

#[test]
fn emitted_twist_verifies() {
    let spec = scratch("ls3.json");
    std::fs::write(&spec, r#"{"group-algebra": "S3"}"#).unwrap();
    let (t, s) = (scratch("ls3_t.json"), scratch("ls3_s.json"));
    let out = crosslab(&[
        "qsystem",
        path_str(&spec),
        "--emit-twist",
        path_str(&t),
        "--emit-involution",
        path_str(&s),
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = crosslab(&["verify", path_str(&t), path_str(&s), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(all_passed(&json(&out)));
}

#[test]
fn orthogonal_invariants() {
    for (group, delta, dim) in [("o2", "trivial", 3), ("o3", "2,0.5,1", 1), ("o2", "[2, 0.5]", 2)] {
        let out = crosslab(&["invariants", "--group", group, "--delta", delta, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{group} {delta}");
        let r = json(&out);
        assert_eq!(r["dim_found"], Value::from(dim), "{group} {delta}");
    }
}

#[test]
fn spectrum_must_match_the_group() {
    let out = crosslab(&["invariants", "--group", "o3", "--delta", "2,0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_is_deterministic() {
    let a = crosslab(&["demo", "--json", "--seed", "42"]);
    let b = crosslab(&["demo", "--json", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], Value::Bool(true));
    let loose = crosslab(&["demo", "--tol", "1e-6", "--quiet"]);
    assert_eq!(loose.status.code(), Some(0));
}

#[test]
fn bad_input_exits_with_two() {
    let t = scratch("garbage.json");
    std::fs::write(&t, "{not json").unwrap();
    let s = conjugation_file("conj2c.json", 2);
    assert_eq!(crosslab(&["verify", path_str(&t), path_str(&s)]).status.code(), Some(2));
    let missing = scratch("missing.json");
    assert_eq!(crosslab(&["verify", path_str(&missing), path_str(&s)]).status.code(), Some(2));
    // operator on C³ ⊗ C³ against an involution on C²
    let t3 = scratch("flip3.json");
    write_json(&t3, &flip(3)).unwrap();
    assert_eq!(crosslab(&["verify", path_str(&t3), path_str(&s)]).status.code(), Some(2));
    assert_eq!(crosslab(&["verify", "--tol", "-1", "a", "b"]).status.code(), Some(2));
    assert_eq!(crosslab(&["frobnicate"]).status.code(), Some(2));
}
