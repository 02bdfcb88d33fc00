use std::f64::consts::TAU;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn toposcope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toposcope")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_circle(path: &Path, n: usize) {
    let text: String =
        (0..n).map(|i| TAU * i as f64 / n as f64).map(|t| format!("{},{}\n", t.cos(), t.sin())).collect();
    fs::write(path, text).unwrap();
}

#[test]
fn diagram_json_of_square() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("square.csv");
    fs::write(&input, "0,0\n1,0\n1,1\n0,1\n").unwrap();
    let out = toposcope(&["diagram", "--input", input.to_str().unwrap(), "--max-dim", "1", "--max-edge", "auto"]);
    let v = stdout_json(&out);
    let pairs = v["pairs"].as_array().unwrap();
    let h0_deaths: Vec<&Value> = pairs.iter().filter(|p| p["dim"] == 0).map(|p| &p["death"]).collect();
    assert_eq!(h0_deaths.len(), 4);
    let h1: Vec<&Value> = pairs.iter().filter(|p| p["dim"] == 1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0]["death"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn diagram_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("circle.csv");
    let svg = dir.path().join("d.svg");
    write_circle(&input, 12);
    let out =
        toposcope(&["diagram", "--input", input.to_str().unwrap(), "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("class=\"h1\""));
}

#[test]
fn mapper_of_circle() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("circle.csv");
    let graph = dir.path().join("graph.json");
    write_circle(&input, 40);
    let out = toposcope(&[
        "mapper",
        "--input",
        input.to_str().unwrap(),
        "--filter",
        "proj:0",
        "--intervals",
        "4",
        "--overlap",
        "0.3",
        "--clusterer",
        "sl:0.5",
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(graph).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn mapper_rejects_bad_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("circle.csv");
    write_circle(&input, 10);
    let out = toposcope(&["mapper", "--input", input.to_str().unwrap(), "--overlap", "1.2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("overlap"), "{err}");
}

#[test]
fn missing_input_fails_with_path() {
    let out = toposcope(&["diagram", "--input", "/nonexistent/cloud.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/cloud.csv"));
}

fn run(cfg: &Path, input: &Path, out: &Path) -> Output {
    toposcope(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn run_writes_outputs_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    write_circle(&data.join("a.csv"), 16);
    write_circle(&data.join("b.csv"), 24);
    fs::write(data.join("c.csv"), "1,2\n3\n").unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"input":{"kind":"point_cloud"},
            "stages":[{"op":"vr_persistence","params":{"max_dim":1}}],
            "output":{"formats":["json","csv","svg"]}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&cfg, &data, &out_dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let records: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("outputs.json")).unwrap()).unwrap();
    let records = records.as_array().unwrap();
    let names: Vec<&str> = records.iter().map(|r| r["sample"].as_str().unwrap()).collect();
    assert_eq!(names, ["a", "b", "c"]);
    assert!(records[2]["output"].get("error").is_some(), "{}", records[2]);
    for (i, name) in ["a", "b"].iter().enumerate() {
        let pairs = records[i]["output"]["ok"]["data"]["pairs"].as_array().unwrap().len();
        let csv = fs::read_to_string(out_dir.join(format!("{name}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), pairs);
        assert!(out_dir.join(format!("{name}.svg")).exists());
    }
    assert!(!out_dir.join("c.csv").exists());
}

#[test]
fn run_writes_curve_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ring.csv");
    write_circle(&input, 16);
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"input":{"kind":"point_cloud"},
            "stages":[{"op":"vr_persistence","params":{"max_dim":1}},
                      {"op":"persistence_landscape","params":{"k":1,"n_layers":2,"n_bins":10}}],
            "output":{"formats":["csv"]}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    assert!(run(&cfg, &input, &out_dir).status.success());
    let csv = fs::read_to_string(out_dir.join("ring.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.lines().all(|l| l.split(',').count() == 3));
}

#[test]
fn run_rejects_config_with_mismatched_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"input":{"kind":"image"},"stages":[{"op":"takens_embedding","params":{"dimension":2}}]}"#)
        .unwrap();
    let out = toposcope(&["run", "--config", cfg.to_str().unwrap(), "--input", "x.csv", "--out", "o"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stages[0]"));
}
