use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json", "--no-timestamp"]);
    let out = run(&full);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code, v)
}

#[test]
fn eval_phi_18() {
    let (code, v) = json(&["eval", "--fn", "phi", "--n", "18"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "arithdyn.report/1");
    assert_eq!(v["status"], "INFO");
    assert_eq!(v["results"]["value"], "6");
    let text = String::from_utf8(run(&["eval", "--fn", "phi", "--n", "18"]).stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["value", "6"]));
}

#[test]
fn eval_with_parameter_and_factored_input() {
    let (_, v) = json(&["eval", "--fn", "J", "--k", "2", "--n", "6"]);
    assert_eq!(v["results"]["value"], "24");
    let (_, v) = json(&["eval", "--fn", "sigma", "--l", "1", "--n", "12"]);
    assert_eq!(v["results"]["value"], "28");
    let (_, v) = json(&["eval", "--fn", "psi", "--n", "2^300*3"]);
    assert_eq!(v["results"]["raw"], "2^301*3");
}

#[test]
fn verify_lemma_phi_antiorbit() {
    let out = run(&[
        "verify-lemma",
        "phi-antiorbit",
        "--families",
        "20",
        "--depth",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("verify-lemma: PASS"));
    assert!(text.contains("a(phi) >= 20 certified at depth 30"));
}

#[test]
fn lemma_list_has_every_id() {
    let (code, v) = json(&["verify-lemma", "--list"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = v["results"]["ids"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 17);
    for id in ids {
        let (code, v) = json(&[
            "verify-lemma",
            id,
            "--families",
            "2",
            "--depth",
            "3",
            "--bound",
            "300",
        ]);
        assert!(code == 0 || code == 1, "{id}: exit {code}");
        assert_eq!(v["results"]["lemma_id"], id);
    }
}

#[test]
fn failing_check_exits_one_with_counterexample() {
    let (code, v) = json(&[
        "verify-lemma",
        "separation",
        "--fn",
        "phi",
        "--bound",
        "1000",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "FAIL");
    assert_eq!(v["counterexample"]["position"], 2);
    let (code, v) = json(&["separation", "--fn", "psi", "--bound", "1000"]);
    assert_eq!(code, 0);
    assert!(v.get("counterexample").is_none());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "--fn", "zeta", "--n", "5"][..],
        &["eval", "--fn", "phi"],
        &["frobnicate"],
        &["verify-lemma", "no-such-lemma"],
        &["verify-lemma", "psi-orbit", "--fn", "phi"],
        &["centropy", "--fn", "Omega", "--seeds", "1"],
        &["components", "--fn", "phi", "--bound", "0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_file_overrides_and_rejects() {
    let mut good = tempfile::NamedTempFile::new().unwrap();
    writeln!(good, "[depth_caps]\nd_anti = 3").unwrap();
    let path = good.path().to_str().unwrap();
    let out = run(&["verify-lemma", "d-antiorbit", "--config", path]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "depth 5 exceeds the configured cap"
    );
    let (code, v) = json(&[
        "verify-lemma",
        "d-antiorbit",
        "--depth",
        "3",
        "--config",
        path,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["provenance"]["config"]["depth_caps"]["d_anti"], 3);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "sieve = 10").unwrap();
    let out = run(&[
        "eval",
        "--fn",
        "phi",
        "--n",
        "5",
        "--config",
        bad.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration"));
}

#[test]
fn json_is_deterministic_and_timestamp_optional() {
    let args = [
        "table",
        "connectivity",
        "--bound",
        "500",
        "--format",
        "json",
    ];
    let a = run(&[&args[..], &["--no-timestamp"]].concat());
    let b = run(&[&args[..], &["--no-timestamp"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("timestamp").is_none());
    let v: Value = serde_json::from_slice(&run(&args).stdout).unwrap();
    assert!(v["timestamp"].as_u64().unwrap() > 1_600_000_000);
}

#[test]
fn csv_output() {
    let out = run(&[
        "components",
        "--fn",
        "phi",
        "--bound",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("component,size,least,members"));
    assert_eq!(lines.next(), Some("1,10,1,\"1,2,3,4,5,6,7,8,9,10\""));
}

#[test]
fn preimage_family_and_topology_commands() {
    let (_, v) = json(&["inverse-phi", "--n", "4"]);
    assert_eq!(v["results"]["members"], serde_json::json!([5, 8, 10, 12]));
    assert_eq!(v["results"]["completeness"], "COMPLETE");
    let (_, v) = json(&["preimage", "--fn", "psi", "--n", "12"]);
    assert_eq!(v["results"]["members"], serde_json::json!([6, 8, 9, 11]));
    let (_, v) = json(&["preimage", "--fn", "phistar", "--n", "2", "--bound", "100"]);
    assert_eq!(v["results"]["completeness"], "BOUNDED_SEARCH(100)");
    let (_, v) = json(&["phi-bound", "--n", "4"]);
    assert!(v["results"]["decimal"].is_string());
    let (_, v) = json(&[
        "family",
        "--scheme",
        "psi-orbit",
        "--index",
        "2",
        "--depth",
        "3",
    ]);
    assert_eq!(
        v["results"]["terms"],
        serde_json::json!(["2*3^2", "2^2*3^2", "2^3*3^2"])
    );
    let (_, v) = json(&["orbit", "--fn", "phi", "--n", "6", "--depth", "5"]);
    assert_eq!(
        v["results"]["terms"],
        serde_json::json!(["2*3", "2", "1", "1"])
    );
    let (_, v) = json(&[
        "min-open",
        "--fn",
        "phi",
        "--n",
        "6",
        "--topology",
        "taubar",
    ]);
    assert_eq!(v["results"]["members"], serde_json::json!([1, 2, 6]));
    let (_, v) = json(&["min-open", "--fn", "psi", "--n", "1"]);
    assert_eq!(v["results"]["members"], serde_json::json!([1]));
    let (code, v) = json(&[
        "partition-demo",
        "--block",
        "0mod3",
        "--block",
        "rest",
        "--bound",
        "12",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["components"], 2);
}

#[test]
fn entropy_commands() {
    let (_, v) = json(&["entropy", "--fn", "phi", "--seeds", "6", "--horizon", "6"]);
    assert_eq!(v["results"]["count"], 3);
    let (_, v) = json(&["centropy", "--fn", "psi", "--seeds", "6", "--horizon", "10"]);
    assert_eq!(v["results"]["count"], 5);
    let (_, v) = json(&[
        "centropy",
        "--fn",
        "psi",
        "--seeds",
        "6",
        "--horizon",
        "10",
        "--mode",
        "core",
    ]);
    assert_eq!(v["results"]["mode"], "CORE");
    assert_eq!(v["results"]["count"], 0);
}

#[test]
fn oracle_eval_and_search() {
    let (code, v) = json(&["oracle-eval", "--fn", "J2", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["oracle"], "96");
    let (code, v) = json(&[
        "search",
        "--fn",
        "psi",
        "--depth",
        "5",
        "--families",
        "2",
        "--bound",
        "1000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["label"], "EXPERIMENTAL");
}

#[test]
fn tables_render() {
    let out = run(&["table", "orbit-numbers", "--families", "4", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(">= 4 (depth 6)"));
    let out = run(&["table", "entropies", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(0));
    // d(2) = 2 breaks the strict hypothesis of the connectivity lemma.
    let (code, v) = json(&["table", "connectivity", "--bound", "100"]);
    assert_eq!(code, 1);
    assert_eq!(v["counterexample"]["position"], 2);
}
