use std::process::{Command, Output};

use serde_json::Value;

fn diffpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn vertex_count(v: &Value) -> usize {
    v["vertices"].as_array().expect("vertex list").len()
}

#[test]
fn path3_has_four_vertices_including_uniform() {
    let v = json(&diffpoly(&["enumerate", "--graph", "path:3", "--rho", "0,2/7,5/7"]));
    assert_eq!(vertex_count(&v), 4);
    let uniform = serde_json::json!(["1/3", "1/3", "1/3"]);
    let bar = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["point"] == uniform)
        .expect("uniform vertex");
    assert_eq!(bar["kind"], "asymptotic");
    assert_eq!(v["completeness"], "proven");
}

#[test]
fn cycle4_symmetric_start_has_eighteen() {
    let v = json(&diffpoly(&[
        "enumerate",
        "--graph",
        "cycle:4",
        "--rho",
        "0.1,0.2,0.3,0.4",
    ]));
    assert_eq!(vertex_count(&v), 18);
}

#[test]
fn complete2_has_two() {
    let v = json(&diffpoly(&["enumerate", "--graph", "complete:2", "--rho", "1/4,3/4"]));
    assert_eq!(vertex_count(&v), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "--graph", "cycle:4", "--rho", "1/15,2/15,4/15,8/15"];
    let a = diffpoly(&args);
    let b = diffpoly(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_outputs_reingest() {
    let dir = tempfile::tempdir().unwrap();
    let first = json(&diffpoly(&[
        "enumerate",
        "--graph",
        "cycle:4",
        "--rho",
        "1/10,2/10,3/10,4/10",
    ]));
    let graph_file = dir.path().join("graph.json");
    std::fs::write(&graph_file, first["graph"].to_string()).unwrap();
    let vertex = &first["vertices"][4];
    let rho_file = dir.path().join("rho.json");
    std::fs::write(&rho_file, vertex["point"].to_string()).unwrap();

    let again = json(&diffpoly(&[
        "enumerate",
        "--graph",
        graph_file.to_str().unwrap(),
        "--rho",
        "1/10,2/10,3/10,4/10",
    ]));
    assert_eq!(again, first);
    let moved = json(&diffpoly(&[
        "enumerate",
        "--graph",
        graph_file.to_str().unwrap(),
        "--rho",
        rho_file.to_str().unwrap(),
    ]));
    assert_eq!(moved["rho0"], vertex["point"]);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["enumerate", "--graph", "path:3", "--rho", "1/2,1/2"],
        vec!["enumerate", "--graph", "path:3", "--rho", "1,2,3"],
        vec!["enumerate", "--graph", "wheel:5", "--rho", "uniform:5"],
        vec![
            "optimize",
            "--graph",
            "path:3",
            "--rho",
            "uniform:3",
            "--weights",
            "1,1,2",
        ],
        vec!["verify", "pn", "--n", "40"],
    ] {
        let out = diffpoly(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn optimize_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = diffpoly(&[
        "optimize",
        "--graph",
        "path:4",
        "--rho",
        "exp:4",
        "--weights",
        "1,2,3,4",
        "--method",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("recovered 50.00%"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["recovered_percent"], "50.00");
}

#[test]
fn uniform_start_recovers_nothing() {
    let v = json(&diffpoly(&[
        "optimize",
        "--graph",
        "complete:3",
        "--rho",
        "uniform:3",
        "--weights",
        "1,2,3",
    ]));
    assert_eq!(v["recovered_percent"], "0.00");
}

#[test]
fn svg_and_csv_for_three_vertices() {
    let svg = diffpoly(&[
        "enumerate",
        "--graph",
        "complete:3",
        "--rho",
        "0,2/7,5/7",
        "--format",
        "svg",
    ]);
    assert!(svg.status.success());
    assert!(String::from_utf8_lossy(&svg.stdout).starts_with("<svg"));
    let csv = diffpoly(&[
        "enumerate",
        "--graph",
        "complete:3",
        "--rho",
        "0,2/7,5/7",
        "--format",
        "csv",
    ]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout).lines().count(), 8);
}

#[test]
fn verify_suites_pass() {
    for suite in ["k3", "p3", "c4"] {
        let out = diffpoly(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    }
    let out = diffpoly(&["verify", "pn", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
}
