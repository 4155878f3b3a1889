// SPDX-License-Identifier: MIT
//! End-to-end runs of the binary against small fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regraph-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

const CHAIN: &str = "\
component 1 response: 1
component 2 response: 2
component 3 response: 3
arrow 1 2
arrow 2 3
";

const CONC_CHAIN: &str = "\
component 1 context: 1 2 3
full 1 2
full 2 3
";

const COV_CHAIN: &str = "\
component 1 response: 1 2 3
dashed 1 2
dashed 2 3
";

const FOLLOWUP: &str = "\
component 1 response: Y
component 2 response: T_r
component 3 response: A
component 4 response: T_p
component 5 response: U
arrow Y T_r
arrow Y U
arrow Y T_p
arrow T_r A
arrow A T_p
arrow A U
";

#[test]
fn validate_accepts_chain() {
    let f = fixture("chain.graph", CHAIN);
    let out = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("valid: 3 nodes, 2 edges"));
}

#[test]
fn validate_rejects_bad_file_with_exit_3() {
    let f = fixture(
        "bad.graph",
        "component 1 response: 1\ncomponent 2 response: 2\narrow 2 1\n",
    );
    let out = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("points into the past"));
    assert!(err.contains("line 3"));
}

#[test]
fn query_chain_conditioned_is_independent() {
    let f = fixture("chain.graph", CHAIN);
    for engine in ["paths", "matrix", "both"] {
        let out = run(&[
            "query",
            f.to_str().unwrap(),
            "--a",
            "1",
            "--b",
            "3",
            "--c",
            "2",
            "--engine",
            engine,
        ]);
        assert_eq!(out.status.code(), Some(0), "engine {engine}");
        assert_eq!(stdout(&out).lines().next(), Some("Independent"));
    }
}

#[test]
fn query_reports_witnesses_for_dependence() {
    let f = fixture("chain.graph", CHAIN);
    let out = run(&["query", f.to_str().unwrap(), "--a", "1", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("Dependent"));
    assert!(text.contains("induced arrow: 1 <- 3"));
    assert!(text.contains("active path: 1 2 3"));
}

#[test]
fn query_json_has_stable_fields() {
    let f = fixture("chain.graph", CHAIN);
    let out = run(&[
        "query",
        f.to_str().unwrap(),
        "--a",
        "1",
        "--b",
        "3",
        "--c",
        "2",
        "--json",
    ]);
    let text = stdout(&out);
    assert!(text.contains("\"verdict\":\"Independent\""));
    assert!(text.contains("\"a\":[\"1\"]"));
    assert!(text.contains("\"active_paths\":[]"));
}

#[test]
fn equiv_chain_and_concentration_chain() {
    let f1 = fixture("chain.graph", CHAIN);
    let f2 = fixture("conc.graph", CONC_CHAIN);
    let out = run(&["equiv", f1.to_str().unwrap(), f2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equivalent"));
}

#[test]
fn equiv_chain_and_covariance_chain_differ() {
    let f1 = fixture("chain.graph", CHAIN);
    let f2 = fixture("cov.graph", COV_CHAIN);
    let out = run(&["equiv", f1.to_str().unwrap(), f2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("not equivalent"));
    assert!(text.contains("collision V only in second: (1, 3; inner 2)"));
}

#[test]
fn paths_lists_indirect_confounding() {
    let f = fixture("followup.graph", FOLLOWUP);
    let out = run(&[
        "paths",
        f.to_str().unwrap(),
        "--a",
        "Y",
        "--b",
        "T_p",
        "--c",
        "A,T_r",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Y U A T_p"));
}

#[test]
fn paths_empty_when_treatment_estimable() {
    let f = fixture("followup.graph", FOLLOWUP);
    let out = run(&[
        "paths",
        f.to_str().unwrap(),
        "--a",
        "Y",
        "--b",
        "T_r",
        "--c",
        "A,T_p",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no active paths"));
}

#[test]
fn transform_output_reparses() {
    let f = fixture("chain.graph", CHAIN);
    let out = run(&[
        "transform",
        f.to_str().unwrap(),
        "--alpha",
        "1",
        "--beta",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("arrow 1 3"));
    // the printed transform is itself a valid graph file
    let f2 = fixture("induced.graph", &text);
    let out2 = run(&["validate", f2.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(0));
}

#[test]
fn oracle_passes_on_chain() {
    let f = fixture("chain.graph", CHAIN);
    let out = run(&[
        "oracle",
        f.to_str().unwrap(),
        "--draws",
        "5",
        "--tol",
        "1e-9",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.trim_end().ends_with("OK"));
    assert!(text.contains("1 vs 3 | 2: Independent"));
}

#[test]
fn tables_family_report() {
    let out = run(&["tables", "--family", "1", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("singleton transitivity violated"));
    assert!(text.contains("A _||_ B | C: confirmed"));

    let out = run(&["tables", "--family", "2", "--alpha", "0.3", "--beta", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("intersection violated"));

    let out = run(&["tables", "--family", "3", "--alpha", "0.2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"behaves_as_documented\":true"));
}

#[test]
fn dot_distinguishes_edge_kinds() {
    let mixed = "\
component 1 response: y1 y2
component 2 context: x1 x2
dashed y1 y2
full x1 x2
arrow y1 x1
";
    let f = fixture("mixed.graph", mixed);
    let out = run(&["dot", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"x1\" -> \"y1\";"));
    assert!(text.contains("[dir=none, style=dashed]"));
    assert!(text.contains("\"x1\" -> \"x2\" [dir=none];"));
    assert!(text.contains("cluster_g1"));
}

#[test]
fn usage_errors_exit_2() {
    let f = fixture("chain.graph", CHAIN);
    // missing required flag
    let out = run(&["query", f.to_str().unwrap(), "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown node label
    let out = run(&["query", f.to_str().unwrap(), "--a", "1", "--b", "zz"]);
    assert_eq!(out.status.code(), Some(2));
    // overlapping query sets
    let out = run(&["query", f.to_str().unwrap(), "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // unreadable file
    let out = run(&["validate", "/nonexistent/x.graph"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn engines_agree_flagged_queries() {
    // run the same query through both engines separately and compare words
    let f = fixture("cov.graph", COV_CHAIN);
    for (c, want) in [(None, "Independent"), (Some("2"), "Dependent")] {
        let mut args = vec![
            "query".to_string(),
            f.to_str().unwrap().to_string(),
            "--a".into(),
            "1".into(),
            "--b".into(),
            "3".into(),
        ];
        if let Some(c) = c {
            args.push("--c".into());
            args.push(c.into());
        }
        let mut verdicts = Vec::new();
        for engine in ["paths", "matrix"] {
            let mut full = args.clone();
            full.push("--engine".into());
            full.push(engine.into());
            let refs: Vec<&str> = full.iter().map(|s| s.as_str()).collect();
            let out = run(&refs);
            verdicts.push(stdout(&out).lines().next().unwrap_or_default().to_string());
        }
        assert_eq!(verdicts[0], want);
        assert_eq!(verdicts[1], want);
    }
}
