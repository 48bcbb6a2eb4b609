use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn plearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plearn")).args(args).output().expect("run plearn")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn train_total(o: &Output) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("total_inconsistency "))
        .and_then(|v| v.parse().ok())
        .expect("total line")
}

fn audit_json(model: &Path, data: &Path) -> serde_json::Value {
    let o = plearn(&["audit", "--model", s(model), "--data", s(data)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn mus(report: &serde_json::Value) -> Vec<f64> {
    report["rows"].as_array().unwrap().iter().map(|r| r["mu"].as_f64().unwrap()).collect()
}

#[test]
fn svm_train_writes_linear_model() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n-2,-1\n-1,-1\n1,1\n2,1\n");
    let model = dir.path().join("m.json");
    let o = plearn(&["train", "--learner", "svm", "--w", "0.01", "--data", s(&data), "--out", s(&model)]);
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(m["payload"]["type"], "linear");
    assert_eq!(m["family"], "svm");
    assert_eq!(m["params"]["w"], 0.01);
}

#[test]
fn svm_audit_column_is_the_slack_vector() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n-1,-1\n1,1\n0.5,-1\n2,1\n");
    let model = dir.path().join("m.json");
    let o = plearn(&["train", "--learner", "svm", "--w", "0.1", "--data", s(&data), "--out", s(&model)]);
    let trained = train_total(&o);
    let report = audit_json(&model, &data);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    let (b, a) = (m["payload"]["b"][0].as_f64().unwrap(), m["payload"]["a"].as_f64().unwrap());
    for row in report["rows"].as_array().unwrap() {
        let x: f64 = row["x"][0].as_str().unwrap().parse().unwrap();
        let y = row["y"].as_f64().unwrap();
        let slack = (1.0 - y * (x * b + a)).max(0.0);
        assert!((row["mu"].as_f64().unwrap() - slack).abs() < 1e-12);
    }
    assert_eq!(report["total"].as_f64().unwrap().to_bits(), trained.to_bits());
    let m = mus(&report);
    assert!(m.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn svr_without_tube_or_penalty_prints_absolute_loss() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n0,0.5\n1,1.5\n2,1.5\n3,3.5\n");
    let model = dir.path().join("m.json");
    let o = plearn(&["train", "--learner", "svr", "--epsilon", "0", "--lambda", "0", "--data", s(&data), "--out", s(&model)]);
    assert!(o.status.success());
    let total = train_total(&o);
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    let (b, a) = (m["payload"]["b"][0].as_f64().unwrap(), m["payload"]["a"].as_f64().unwrap());
    let abs_loss: f64 = [(0.0, 0.5), (1.0, 1.5), (2.0, 1.5), (3.0, 3.5)].iter().map(|(x, y)| (y - (b * x + a)).abs()).sum();
    assert!((total - abs_loss).abs() < 1e-12, "{total} vs {abs_loss}");
    let report = audit_json(&model, &data);
    let sum: f64 = mus(&report).iter().sum();
    assert!((sum - total).abs() < 1e-12);
}

#[test]
fn interpolating_svr_audits_to_zero() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n0,1\n1,3\n2,5\n");
    let model = write(
        dir.path(),
        "m.json",
        r#"{"format": "plearn-model", "version": 1, "family": "svr", "params": {"epsilon": 0.0, "lambda": 0.0},
"payload": {"type": "linear", "b": [2.0], "a": 1.0},
"data": {"sha256": "", "rows": 3, "target": "y", "features": [{"name": "x", "kind": "numeric"}]},
"total_inconsistency": 0.0}"#,
    );
    let report = audit_json(&model, &data);
    assert!(mus(&report).iter().all(|&m| m == 0.0));
    assert_eq!(report["total"].as_f64(), Some(0.0));
}

#[test]
fn knn_zero_k_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n0,0\n1,1\n");
    let o = plearn(&["train", "--learner", "knn", "--k", "0", "--data", s(&data), "--out", s(&dir.path().join("m.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_flag_and_missing_parameter_exit_2() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n0,0\n1,1\n");
    let out = dir.path().join("m.json");
    assert_eq!(plearn(&["train", "--learner", "svm", "--data", s(&data), "--out", s(&out)]).status.code(), Some(2));
    assert_eq!(plearn(&["train", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        plearn(&["train", "--learner", "svm", "--w", "1", "--k", "3", "--data", s(&data), "--out", s(&out)]).status.code(),
        Some(2)
    );
}

#[test]
fn data_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.json");
    let dup = write(dir.path(), "dup.csv", "x,y\n1,0\n2,1\n1,1\n");
    let o = plearn(&["train", "--learner", "knn", "--k", "1", "--data", s(&dup), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rows 2 and 4"));
    let bad = write(dir.path(), "bad.csv", "x,y\n1,0\nzz,1\n");
    let o = plearn(&["train", "--learner", "knn", "--k", "1", "--data", s(&bad), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 3, column 1"));
    let labels = write(dir.path(), "labels.csv", "x,y\n1,0\n2,1\n");
    let o = plearn(&["train", "--learner", "svm", "--w", "1", "--data", s(&labels), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn linear_prediction_and_dimension_check() {
    let dir = TempDir::new().unwrap();
    let model = write(
        dir.path(),
        "m.json",
        r#"{"format": "plearn-model", "version": 1, "family": "svm", "params": {"w": 0.5},
"payload": {"type": "linear", "b": [1.0], "a": 0.0},
"data": {"sha256": "", "rows": 2, "target": "y", "features": [{"name": "x", "kind": "numeric"}]},
"total_inconsistency": 0.0}"#,
    );
    let q = write(dir.path(), "q.csv", "x\n2\n-0.5\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n-0.5\n");
    let wide = write(dir.path(), "w.csv", "x,z\n2,3\n");
    assert_eq!(plearn(&["predict", "--model", s(&model), "--query", s(&wide)]).status.code(), Some(1));
}

#[test]
fn knn_predicts_training_label_at_training_point() {
    let dir = TempDir::new().unwrap();
    let data = write(dir.path(), "d.csv", "x,y\n0,0\n1,1\n2,0\n5,1\n");
    let model = dir.path().join("m.json");
    assert!(plearn(&["train", "--learner", "knn", "--k", "1", "--data", s(&data), "--out", s(&model)]).status.success());
    let q = write(dir.path(), "q.csv", "x\n1\n2\n5\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q), "--data", s(&data)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "1\n0\n1\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q)]);
    assert_eq!(o.status.code(), Some(1));
    let other = write(dir.path(), "other.csv", "x,y\n0,0\n1,1\n2,0\n6,1\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q), "--data", s(&other)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tree_and_nb_with_sidecar_schema() {
    let dir = TempDir::new().unwrap();
    let schema = write(dir.path(), "tree.json", r#"{"size": {"kind": "ordinal", "levels": ["s", "m", "l", "xl"]}}"#);
    let nb_schema = write(
        dir.path(),
        "nb_schema.json",
        r#"{"color": {"kind": "nominal", "symbols": ["red", "blue"]}, "shape": {"kind": "nominal", "symbols": ["round", "flat"]}}"#,
    );
    let tree_data = write(dir.path(), "t.csv", "size,label\ns,0\nm,0\nl,1\nxl,1\n");
    let model = dir.path().join("tree_model.json");
    let o = plearn(&["train", "--learner", "dtree", "--schema", s(&schema), "--data", s(&tree_data), "--out", s(&model)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = audit_json(&model, &tree_data);
    let second = audit_json(&model, &tree_data);
    assert_eq!(first, second);
    assert_eq!(first["total"].as_f64(), Some(0.0));
    let q = write(dir.path(), "q.csv", "size\nm\nxl\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q), "--data", s(&tree_data)]);
    assert_eq!(stdout(&o), "0\n1\n");

    let nb_data = write(dir.path(), "n.csv", "color,shape,y\nred,round,1\nred,flat,1\nblue,round,0\nblue,flat,0\n");
    let model = dir.path().join("nb.json");
    let o = plearn(&["train", "--learner", "nb", "--schema", s(&nb_schema), "--data", s(&nb_data), "--out", s(&model)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let q = write(dir.path(), "q2.csv", "shape,color\nround,red\nflat,blue\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q), "--data", s(&nb_data)]);
    assert_eq!(stdout(&o), "1\n0\n");
}

#[test]
fn unknown_model_version_rejected() {
    let dir = TempDir::new().unwrap();
    let model = write(
        dir.path(),
        "m.json",
        r#"{"format": "plearn-model", "version": 7, "family": "svm", "params": {}, "payload": {"type": "none"}, "data": {}, "total_inconsistency": 0}"#,
    );
    let q = write(dir.path(), "q.csv", "x\n1\n");
    let o = plearn(&["predict", "--model", s(&model), "--query", s(&q)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("version 7"));
    let schema = write(dir.path(), "s.json", r#"{"colour": {"kind": "numeric"}}"#);
    let data = write(dir.path(), "d.csv", "color,y\n1,0\n2,1\n");
    let o = plearn(&["train", "--learner", "knn", "--k", "1", "--schema", s(&schema), "--data", s(&data), "--out", s(&dir.path().join("m2.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_single_trial_passes() {
    let o = plearn(&["verify", "--trials", "1", "--seed", "42"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.starts_with("PASS")));
}
