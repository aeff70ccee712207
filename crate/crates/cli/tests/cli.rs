use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ksw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksw")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    ksw(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ksw(&all);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), value)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ksw-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn fig2_causality_verdicts_and_witnesses() {
    let (c, left) = json(&["causality", &fixture("fig2_left.json")]);
    assert_eq!(c, 1);
    assert_eq!(left["verdict"], "NotStablyCausal");
    assert_eq!(left["cycle"], serde_json::json!(["1", "4", "3", "1"]));
    let (c, right) = json(&["causality", &fixture("fig2_right.json")]);
    assert_eq!(c, 0);
    assert_eq!(right["potential"], serde_json::json!([0.0, 1.0, 2.0, 3.0]));
}

#[test]
fn sigma_reverses_edges_before_deciding() {
    let left = fixture("fig2_left.json");
    assert_eq!(code(&["causality", &left, "--sigma", "1,1,1,-1,1"]), 0);
    assert_eq!(code(&["causality", &left, "--sigma", "1,1"]), 2);
    assert_eq!(code(&["causality", &left, "--sigma", "1,1,1,2,1"]), 2);
}

#[test]
fn distance_reports_rationals() {
    let (c, r) = json(&["distance", &fixture("fig1.json"), "1", "3"]);
    assert_eq!(c, 0);
    assert_eq!(r["connes"], r["geodesic"]);
    assert!(r["connes"].as_str().unwrap().contains('/') || r["connes"].as_str().unwrap().parse::<i64>().is_ok());
    assert_eq!(code(&["distance", &fixture("fig1.json"), "1", "nowhere"]), 2);
}

#[test]
fn structure_verification_and_signature_override() {
    assert_eq!(code(&["verify", &fixture("c2.json")]), 0);
    assert_eq!(code(&["verify", &fixture("c2.json"), "--signature", "lorentzian"]), 1);
    assert_eq!(code(&["verify", &fixture("single_edge.json")]), 0);
}

#[test]
fn wick_in_both_directions() {
    let (c, r) = json(&["wick", &fixture("s0.json")]);
    assert_eq!((c, r["ko_dim"].clone()), (0, serde_json::json!([0, 2])));
    let (c, r) = json(&["wick", &fixture("s6.json")]);
    assert_eq!((c, r["verdict"].as_str()), (1, Some("ProvedNone")));
    let (c, r) = json(&["wick", &fixture("c2.json")]);
    assert_eq!(c, 0);
    assert!(r["forms"][0]["round_trip_residual"].as_f64().unwrap() < 1e-12);
    let (c, r) = json(&["wick", &fixture("fig2_right.json")]);
    assert_eq!(c, 0);
    assert_eq!(r["stable_causality"]["verdict"], "StablyCausal");
}

#[test]
fn split_verdicts() {
    assert_eq!(code(&["split", "verify", &fixture("boost_triangle.json")]), 0);
    let (c, r) = json(&["split", "reconstruct", &fixture("boost_triangle.json")]);
    assert_eq!((c, r["result"]["verdict"].as_str()), (1, Some("NotReconstructible")));
    let (c, r) = json(&["split", "reconstruct", &fixture("rotation_triangle.json")]);
    assert_eq!((c, r["result"]["verdict"].as_str()), (0, Some("Reconstructible")));
    let (c, r) = json(&["split", "causality", &fixture("mixed4.json")]);
    assert_eq!((c, r["verdict"]["certificate"]["kind"].as_str()), (1, Some("farkas")));
    assert_eq!(code(&["split", "causality", &fixture("figsc.json")]), 0);
}

#[test]
fn mvs_comparison_flags_the_factor() {
    let (c, r) = json(&["mvs-compare", &fixture("mvs_flat.json")]);
    assert_eq!(c, 1);
    assert_eq!(r["uniform"], true);
    assert_eq!(r["inverse_holds"], true);
    let (c, r) = json(&["mvs-compare", &fixture("mvs_nonregular.json")]);
    assert_eq!((c, r["uniform"].as_bool()), (1, Some(false)));
}

#[test]
fn demos() {
    for name in ["c2", "fig2", "boost-triangle", "figsc"] {
        assert_eq!(code(&["demo", name]), 0, "{name}");
    }
    assert_eq!(code(&["demo", "mvs-flat"]), 1);
    assert_eq!(code(&["demo", "nonesuch"]), 2);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let out = ksw(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&["verify", "/definitely/not/here.json"]), 2);

    let zero = scratch("zero.json", r#"{"vertices":["a","b"],"edges":[{"src":"a","dst":"b","weight":"0"}]}"#);
    let out = ksw(&["verify", zero.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(err["error"].as_str().unwrap().contains("/edges/0"), "{err}");

    let typo = scratch(
        "typo.json",
        r#"{"graph":{"vertices":["a","b"],"edges":[{"src":"a","dst":"b","weight":"1"}]},"n":2,
            "edges":[{"gamma_plus":{"vector":[1,0],"axal":[0,0]}}]}"#,
    );
    assert_eq!(code(&["split", "verify", typo.to_str().unwrap()]), 2);
    let _ = std::fs::remove_file(zero);
    let _ = std::fs::remove_file(typo);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["split", "causality", "figsc.json"],
        vec!["causality", "fig2_left.json"],
        vec!["mvs-compare", "mvs_nonregular.json"],
    ] {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let last = a.pop().unwrap();
        a.push(fixture(&last));
        a.push("--json".into());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(ksw(&a).stdout, ksw(&a).stdout);
    }
}

#[test]
fn json_reports_round_trip() {
    let out = ksw(&["split", "reconstruct", &fixture("rotation_triangle.json"), "--json"]);
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(value, again);
}
