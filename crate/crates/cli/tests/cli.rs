use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fairdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(args)
        .env_remove("FAIRDIV_ORACLE_LIMIT")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn allocate_then_check_composes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let alloc = dir.path().join("alloc.json");
    assert!(fairdiv(&["gen", "random", "--n", "4", "--m", "9", "--seed", "7", "--out", p(&inst)]).status.success());
    assert!(fairdiv(&["allocate", "--instance", p(&inst), "--out", p(&alloc)]).status.success());
    let out = fairdiv(&["check", "--instance", p(&inst), "--allocation", p(&alloc), "--assert-guarantees", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["reports"].as_array().unwrap().len(), 6);
    assert_eq!(json["guarantees"].as_array().unwrap().len(), 4);
    assert!(json["violations"].as_array().unwrap().is_empty());
}

#[test]
fn allocation_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fairdiv(&["gen", "random", "--n", "5", "--m", "12", "--model", "rat:6", "--seed", "3", "--out", p(&inst)]);
    for args in [
        vec!["--algo", "draft-eliminate", "--theta", "3/2"],
        vec!["--algo", "draft-eliminate", "--envy-graph", "adjusted"],
        vec!["--algo", "round-robin"],
        vec!["--algo", "ece"],
    ] {
        let mut full = vec!["allocate", "--instance", p(&inst)];
        full.extend(args);
        let a = fairdiv(&full);
        let b = fairdiv(&full);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn worked_example_check_values() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let alloc = dir.path().join("alloc.json");
    fairdiv(&["gen", "appendix-a", "--out", p(&inst), "--allocation-out", p(&alloc), "--variant", "a-prime"]);
    let out = fairdiv(&["check", "--instance", p(&inst), "--allocation", p(&alloc), "--criteria", "efx,ef1", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["reports"][0]["criterion"], "EFX");
    assert_eq!(json["reports"][0]["ratio"], "3/5");
    assert_eq!(json["reports"][1]["ratio"], "6/5");
}

#[test]
fn hash_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let other = dir.path().join("other.json");
    let alloc = dir.path().join("alloc.json");
    fairdiv(&["gen", "random", "--n", "2", "--m", "4", "--seed", "1", "--out", p(&inst)]);
    fairdiv(&["gen", "random", "--n", "2", "--m", "4", "--seed", "2", "--out", p(&other)]);
    fairdiv(&["allocate", "--instance", p(&inst), "--out", p(&alloc)]);
    let out = fairdiv(&["check", "--instance", p(&other), "--allocation", p(&alloc)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unbacked_configuration_is_noted() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let alloc = dir.path().join("alloc.json");
    fairdiv(&["gen", "random", "--n", "3", "--m", "6", "--out", p(&inst)]);
    let out = fairdiv(&["allocate", "--instance", p(&inst), "--theta", "2", "--out", p(&alloc)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no theorem-backed guarantee"));
    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&alloc).unwrap()).unwrap();
    assert_eq!(file["provenance"]["parameters"]["guarantee"], "no theorem-backed guarantee");
    let out = fairdiv(&["check", "--instance", p(&inst), "--allocation", p(&alloc), "--assert-guarantees"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"goods": ["a"], "valuations": [[-1]]}"#).unwrap();
    assert_eq!(fairdiv(&["allocate", "--instance", p(&bad)]).status.code(), Some(2));
    assert_eq!(fairdiv(&["allocate", "--instance", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(fairdiv(&["allocate", "--instance", p(&bad), "--theta", "x"]).status.code(), Some(2));
}

#[test]
fn oracle_limit_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fairdiv(&["gen", "random", "--n", "2", "--m", "8", "--out", p(&inst)]);
    let out = Command::new(env!("CARGO_BIN_EXE_fairdiv"))
        .args(["shares", "--instance", p(&inst), "--agent", "0"])
        .env("FAIRDIV_ORACLE_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shares_reports_partition() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    fairdiv(&["gen", "appendix-a", "--out", p(&inst)]);
    let out = fairdiv(&["shares", "--instance", p(&inst), "--agent", "1"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["value"], "12");
    assert_eq!(json["partition"].as_array().unwrap().len(), 3);
    let out = fairdiv(&["shares", "--instance", p(&inst), "--agent", "0", "--parts", "2", "--goods", "a,b,c"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["parts"], 2);
}

#[test]
fn adversarial_generation_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let alloc = dir.path().join("alloc.json");
    let out = fairdiv(&[
        "gen", "adversarial", "--n", "3", "--k", "1", "--alpha", "1/2", "--beta", "1/2", "--out", p(&inst),
        "--allocation-out", p(&alloc),
    ]);
    assert!(out.status.success());
    let out = fairdiv(&["check", "--instance", p(&inst), "--allocation", p(&alloc), "--criteria", "pmms", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["reports"][0]["ratio"], "1/2");
}

#[test]
fn stress_passes_proven_bounds() {
    let out = fairdiv(&["stress", "--trials", "40", "--seed", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["trials_run"], 40);
    assert_eq!(json["passed"], true);
}

#[test]
fn stress_violation_writes_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let cex = dir.path().join("cex.json");
    let out = fairdiv(&[
        "stress", "--trials", "200", "--assert", "ef>=1", "--counterexample-out", p(&cex),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cex).unwrap()).unwrap();
    assert_eq!(json["criterion"], "EF");
    // The artifact replays through check.
    let inst = dir.path().join("inst.json");
    let alloc = dir.path().join("alloc.json");
    fs::write(&inst, json["instance"].to_string()).unwrap();
    fs::write(&alloc, json["allocation"].to_string()).unwrap();
    let out = fairdiv(&["check", "--instance", p(&inst), "--allocation", p(&alloc), "--criteria", "ef", "--json"]);
    let replay: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(replay["reports"][0]["ratio"], json["ratio"]);
}

#[test]
fn reproduce_succeeds() {
    let out = fairdiv(&["reproduce", "--trials", "30", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["ok"], true);
    assert_eq!(json["fixture"].as_array().unwrap().len(), 12);
}

#[test]
fn zero_trials_is_an_empty_pass() {
    let out = fairdiv(&["stress", "--trials", "0", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["trials_run"], 0);
    assert!(json["minima"].as_array().unwrap().iter().all(|m| m["min"] == "inf"));
}
