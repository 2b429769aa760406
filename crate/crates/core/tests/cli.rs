use std::path::Path;
use std::process::{Command, Output};

use dsub::harness::{read_csv, CSV_HEADER};

fn dsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = dsub(args);
    assert!(
        out.status.success(),
        "dsub {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_build_simulate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let d = dir.path().join("d.txt");
    ok(&["generate", "--z", "4", "--n", "400", "--seed", "3", "--out", s(&g)]);
    ok(&["build", "--load", s(&g), "--alpha", "0.5", "--seed", "1", "--out", s(&d)]);
    let gt = std::fs::read_to_string(&g).unwrap();
    let dt = std::fs::read_to_string(&d).unwrap();
    let gr = dsub::Graph::read_edge_list(gt.as_bytes()).unwrap();
    let dr = dsub::Graph::read_edge_list(dt.as_bytes()).unwrap();
    assert_eq!(gr.node_count(), 400);
    assert!(dr.is_subgraph_of(&gr));

    let runs = dir.path().join("runs.csv");
    let summary = ok(&["simulate", "--load", s(&g), "--alpha", "0.5", "--runs", "20", "--out", s(&runs)]);
    for key in ["pn=", "pm=", "pt=", "zd="] {
        assert!(summary.contains(key), "{summary}");
    }
    let records = std::fs::read_to_string(&runs).unwrap();
    assert_eq!(records.lines().count(), 21);
}

#[test]
fn predict_point_and_sweep() {
    let one = ok(&["predict", "--z", "5", "--alpha", "0.5", "--gamma", "0.9"]);
    assert_eq!(one.lines().count(), 2);
    let sweep = ok(&["predict", "--sweep", "2"]);
    assert!(sweep.lines().count() > 100);
    assert!(sweep.contains("nonconvergent"));
}

#[test]
fn experiment_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "experiment".to_string(),
            "--model".into(),
            "poisson".into(),
            "--range".into(),
            "3:5:1".into(),
            "--alpha".into(),
            "0.25,1".into(),
            "--heuristic".into(),
            "uniform,degree".into(),
            "--graphs".into(),
            "3".into(),
            "--runs".into(),
            "10".into(),
            "--n".into(),
            "500".into(),
            "--seed".into(),
            "42".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    for dir in [a.path(), b.path()] {
        let v = args(dir);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    let ca = std::fs::read(a.path().join("experiment.csv")).unwrap();
    let cb = std::fs::read(b.path().join("experiment.csv")).unwrap();
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert_eq!(read_csv(&text).unwrap().len(), 3 * 2 * 2);
    let svgs = std::fs::read_dir(a.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 8);

    let plot = a.path().join("pn.svg");
    ok(&[
        "plot",
        "--input",
        s(&a.path().join("experiment.csv")),
        "--metric",
        "pn",
        "--heuristic",
        "uniform",
        "--out",
        s(&plot),
    ]);
    assert!(std::fs::read_to_string(plot).unwrap().starts_with("<svg"));
}

#[test]
fn errors_exit_nonzero() {
    let below = dsub(&["predict", "--z", "0.5", "--alpha", "0.5"]);
    assert!(!below.status.success());
    assert!(String::from_utf8_lossy(&below.stderr).contains("error"));
    assert!(!dsub(&["simulate", "--alpha", "1.5", "--n", "100"]).status.success());
    assert!(!dsub(&["plot", "--input", "/nonexistent.csv", "--metric", "pn", "--out", "/tmp/x.svg"]).status.success());
    assert!(!dsub(&["experiment"]).status.success());
}
