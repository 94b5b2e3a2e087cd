use std::fs;
use std::process::{Command, Output};

fn lsmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsmap"))
        .args(args)
        .env_remove("LSMAP_LOG")
        .output()
        .expect("binary runs")
}

#[test]
fn map_writes_circuit_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pair.qasm");
    fs::write(&input, "qubits 3\nh q0\ncnot q0,q2\ncnot q1,q2\n").unwrap();
    let out = dir.path().join("out.qasm");
    let report = dir.path().join("report.json");
    let o = lsmap(&[
        "map", "--arch", "c", "--rows", "2", "--cols", "2", "-d", "3", "--sched", "alap", "--commute", "on",
        "--place", "smart", "--window", "10", "--emit", "logical",
        input.to_str().unwrap(), "-o", out.to_str().unwrap(), "--report", report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let circuit = fs::read_to_string(&out).unwrap();
    assert!(circuit.starts_with("qubits "));
    assert!(circuit.contains("cnot"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["benchmark"], "pair");
    assert_eq!(v["stats"]["n_cnots"], 2);
    assert!(v.get("runtime_ms").is_none());
    let l_s = v["l_s"].as_f64().unwrap();
    let l_r = v["l_r"].as_f64().unwrap();
    assert_eq!(v["latency_overhead"].as_f64().unwrap(), (l_r - l_s) / l_s);
}

#[test]
fn map_is_deterministic() {
    let run = || lsmap(&["map", "builtin:7-enc", "--arch", "t", "--emit", "physical"]).stdout;
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
}

#[test]
fn runtime_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = lsmap(&["map", "builtin:7-enc", "--runtime", "--report", report.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["runtime_ms"].is_u64());
}

#[test]
fn verify_accepts_every_construction() {
    let o = lsmap(&["verify", "--mutants"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.contains("t-SWAP"));
}

#[test]
fn compare_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = lsmap(&["compare", "--mode", "commutation", "--arch", "c", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("benchmark,latency_off,latency_on,gain_pct\n7-enc,64,46,"));
}

#[test]
fn errors_are_reported_with_stage() {
    let o = lsmap(&["map", "builtin:7-enc", "--rows", "2", "--cols", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("config:"));
    let o = lsmap(&["map", "builtin:7-enc", "--window", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("route:"));
    let o = lsmap(&["map", "builtin:nope"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown benchmark"));
}
