use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toricwedge"))
}

fn run(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(w) = workers {
        cmd.env("TORICWEDGE_WORKERS", w);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn check_plane_fans() {
    let dir = TempDir::new().unwrap();
    let square = write(&dir, "square.json", r#"{"rays":[[1,0],[0,1],[-1,0],[0,-1]]}"#);
    let out = run(&["check", "--in", &square], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["verdict"], "projective");
    assert_eq!(doc["oracles_agree"], true);
    assert_eq!(doc["input"], "fan");
    assert_eq!(doc["shephard"]["kind"], "interior_point");
    assert_eq!(doc["support_function"]["kind"], "support_heights");
    // rationals are "p/q" strings
    let w = doc["shephard"]["witness"][0].as_str().unwrap();
    assert!(w.contains('/'));
}

#[test]
fn check_writes_out_file() {
    let dir = TempDir::new().unwrap();
    let fan = write(&dir, "p.json", r#"{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]}"#);
    let target = dir.path().join("cert.json");
    let out = run(&["check", "--in", &fan, "--out", target.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(read_json(&target)["verdict"], "projective");
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"rays":[[1,0],[0,1],[-1,-2]]}"#);
    let out = run(&["check", "--in", &bad], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let junk = write(&dir, "junk.json", "{\"foo\": 1}");
    assert_eq!(run(&["check", "--in", &junk], None).status.code(), Some(2));
    assert_eq!(run(&["check", "--in", "/nonexistent/x.json"], None).status.code(), Some(2));
    let bad_sig = run(&["classify", "--m", "4", "--j", "1,1,1"], None);
    assert_eq!(bad_sig.status.code(), Some(2));
    let workers = run(&["classify", "--m", "3", "--j", "1,1,1"], Some("zero"));
    assert_eq!(workers.status.code(), Some(2));
}

#[test]
fn check_matrix_and_puzzle() {
    let dir = TempDir::new().unwrap();
    // CP^3 as a characteristic matrix over the wedged triangle
    let matrix = write(
        &dir,
        "m.json",
        r#"{"n":3,"cols":[
            {"label":"1_1","v":[1,0,0]},{"label":"1_2","v":[0,0,1]},
            {"label":"2_1","v":[0,1,0]},{"label":"3_1","v":[-1,-1,-1]}]}"#,
    );
    let out = run(&["check", "--in", &matrix], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["input"], "matrix");
    assert_eq!(doc["dimension"], 3);

    let puzzle = write(
        &dir,
        "pz.json",
        r#"{"m":5,"J":[2,1,1,1,1],
            "base":{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]},
            "edges":[{"color":1,"from":[1,1,1,1,1],"to":[2,1,1,1,1],"e":1}]}"#,
    );
    let out = run(&["check", "--in", &puzzle], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["input"], "puzzle");

    let wrong = write(
        &dir,
        "pz2.json",
        r#"{"m":5,"J":[2,1,1,1,1],
            "base":{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]},
            "edges":[{"color":1,"from":[1,1,1,1,1],"to":[2,1,1,1,1],"e":5},
                     {"color":2,"from":[1,1,1,1,1],"to":[1,2,1,1,1],"e":0}]}"#,
    );
    assert_eq!(run(&["check", "--in", &wrong], None).status.code(), Some(2));
}

#[test]
fn classify_counts() {
    let out = run(&["classify", "--m", "3", "--j", "2,1,1"], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["summary"]["classes"], 1);
    assert_eq!(doc["summary"]["fraction_projective"], "1/1");

    let out = run(&["classify", "--m", "4", "--j", "1,1,1,1", "--base-depth", "2"], None);
    assert_eq!(stdout_json(&out)["summary"]["classes"], 3);

    let out = run(
        &["classify", "--m", "5", "--j", "2,1,1,1,1", "--base-depth", "1", "--e-bound", "2"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let summary = &stdout_json(&out)["summary"];
    assert_eq!(summary["classes"], summary["projective"]);
    assert_eq!(summary["disagreements"], 0);
}

#[test]
fn classify_is_deterministic_across_workers() {
    let dir = TempDir::new().unwrap();
    let args = |name: &str| {
        vec![
            "classify".to_owned(),
            "--m".into(),
            "5".into(),
            "--j".into(),
            "2,1,1,1,1".into(),
            "--base-depth".into(),
            "2".into(),
            "--e-bound".into(),
            "2".into(),
            "--out".into(),
            dir.path().join(name).to_str().unwrap().to_owned(),
        ]
    };
    let mut texts = Vec::new();
    for (w, name) in [("1", "a.json"), ("3", "b.json")] {
        let a = args(name);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(run(&refs, Some(w)).status.code(), Some(0));
        texts.push(std::fs::read_to_string(dir.path().join(name)).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn reduce_plane_fans() {
    let dir = TempDir::new().unwrap();
    let plane = write(&dir, "cp2.json", r#"{"rays":[[1,0],[0,1],[-1,-1]]}"#);
    let out = run(&["reduce", "--in", &plane], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["trace"], serde_json::json!([]));
    assert_eq!(doc["surface"]["kind"], "CP2");

    let pentagon = write(&dir, "p.json", r#"{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]}"#);
    let doc = stdout_json(&run(&["reduce", "--in", &pentagon], None));
    assert_eq!(doc["trace"].as_array().unwrap().len(), 1);
    assert_eq!(doc["surface"]["kind"], "Hirzebruch");
    assert_eq!(doc["base"]["rays"].as_array().unwrap().len(), 4);
}

#[test]
fn shephard_documents() {
    let dir = TempDir::new().unwrap();
    let plane = write(&dir, "cp2.json", r#"{"rays":[[1,0],[0,1],[-1,-1]]}"#);
    let out = run(&["shephard", "--in", &plane], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["diagram"]["ambient_dim"], 0);
    assert_eq!(doc["cofaces"].as_array().unwrap().len(), 3);

    let pentagon = write(&dir, "p.json", r#"{"rays":[[1,0],[0,1],[-1,1],[-1,0],[2,-1]]}"#);
    let doc = stdout_json(&run(&["shephard", "--in", &pentagon], None));
    assert_eq!(doc["diagram"]["ambient_dim"], 2);
    assert_eq!(doc["s_sigma"]["verdict"], "projective");
    assert_eq!(doc["diagram"]["points"].as_object().unwrap().len(), 5);
}
