use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmkit"))
        .args(args)
        .env_remove("CMKIT_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_code(out: &Output) -> String {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = stderr.lines().collect();
    assert_eq!(lines.len(), 1, "{stderr}");
    let v: Value = serde_json::from_str(lines[0]).unwrap();
    v["error"].as_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_gm6() {
    let out = cmkit(&["analyze", "gm:6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["genus"], 4);
    assert_eq!(v["status"], "CM_CERTIFIED");
    assert_eq!(v["streit_value"], 0);
    assert_eq!(v["group_order"], 24);
}

#[test]
fn analyze_gm8_relation_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmkit(&["analyze", "gm:8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["genus"], 5);
    let mults: Vec<u64> = v["relation"]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mults, vec![1, 2]);
    for f in v["relation"]["factors"].as_array().unwrap() {
        assert!(f["route"].is_string() && f["evidence"].is_object() && f["genus"].is_u64());
    }

    let path = write(
        dir.path(),
        "analyze.json",
        &String::from_utf8(out.stdout).unwrap(),
    );
    let checked = cmkit(&["verify", "gm:8", "--relation", &path]);
    assert_eq!(checked.status.code(), Some(0));
    let c = json(&checked);
    assert_eq!(c["holds"], true);
    assert_eq!(c["status"], "CM_CERTIFIED");
}

#[test]
fn verify_reports_failing_relation() {
    let dir = tempfile::tempdir().unwrap();
    let rel = r#"{"n":1,"factors":[{"subgroup_gens":["(2 3)(4 7)(5 8)(6 9)"],"multiplicity":1}]}"#;
    let path = write(dir.path(), "rel.json", rel);
    let out = cmkit(&["verify", "gm:6", "--relation", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["status"], "INCONCLUSIVE");

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"n":1,"factors":[{"subgroup_gens":["(0 1)"],"multiplicity":1}]}"#,
    );
    let out = cmkit(&["verify", "gm:6", "--relation", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "ElementNotInGroup");
}

#[test]
fn streit_only() {
    let out = cmkit(&["streit", "gm:12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["genus"], 9);
    assert!(v["streit_value"].is_u64());
    let s = v["streit_value"].as_u64().unwrap();
    assert_eq!(
        v["status"],
        if s == 0 {
            "CM_CERTIFIED"
        } else {
            "INCONCLUSIVE"
        }
    );
}

#[test]
fn table_report_shape() {
    let out = cmkit(&["table", "gm:6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let classes = v["classes"].as_array().unwrap();
    let rows = v["irreducibles"].as_array().unwrap();
    assert_eq!(classes.len(), rows.len());
    assert_eq!(v["exponent"], 12);
    // trivial character first, identity class first
    assert!(rows[0].as_array().unwrap().iter().all(|x| x == "1"));
    assert_eq!(classes[0]["size"], 1);
    let sizes: u64 = classes.iter().map(|c| c["size"].as_u64().unwrap()).sum();
    assert_eq!(sizes, 24);
}

#[test]
fn quotients_from_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = write(
        dir.path(),
        "s3.json",
        r#"{"degree":3,"generators":[[1,0,2],[1,2,0]]}"#,
    );
    let out = cmkit(&["quotients", &s3, "--vector", r#"["g0", "(1 2)", [1,2,0]]"#]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["genus"], 0);
    assert_eq!(v["quotients"].as_array().unwrap().len(), 2);

    let by_sig = cmkit(&["quotients", &s3, "--signature", "2,2,3"]);
    assert_eq!(
        json(&by_sig)["signature"]["periods"],
        serde_json::json!([2, 2, 3])
    );

    let missing = cmkit(&["streit", &s3]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(error_code(&missing), "MissingVector");

    let bad = cmkit(&["streit", &s3, "--vector", "g0,g0,g1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(error_code(&bad), "InvalidVector");
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = write(dir.path(), "g.json", "{not json");
    for (args, code) in [
        (vec!["table", malformed.as_str()], "Parse"),
        (vec!["frobnicate", "gm:6"], "UnknownCommand"),
        (vec!["analyze", "gm:9"], "InvalidParameter"),
        (vec!["analyze", "gm:x"], "Parse"),
        (vec!["table", "/nonexistent/group.json"], "Io"),
    ] {
        let out = cmkit(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(error_code(&out), code, "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn resource_bound_exits_two() {
    let out = cmkit(&["--max-order", "20", "analyze", "gm:6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "GroupTooLarge");

    let env = Command::new(env!("CARGO_BIN_EXE_cmkit"))
        .args(["table", "gm:8"])
        .env("CMKIT_MAX_ORDER", "16")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
    assert_eq!(error_code(&env), "GroupTooLarge");

    let dir = tempfile::tempdir().unwrap();
    let s5 = write(
        dir.path(),
        "s5.json",
        r#"{"degree":5,"generators":[[1,0,2,3,4],[1,2,3,4,0]]}"#,
    );
    let out = cmkit(&["--max-order", "100", "table", &s5]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [["analyze", "gm:10"], ["table", "gm:8"]] {
        let first = cmkit(&args);
        let second = cmkit(&args);
        assert_eq!(first.stdout, second.stdout);
    }
    let a = cmkit(&[
        "batch", "--source", "gm:6", "--source", "gm:8", "--source", "gm:10",
    ]);
    let b = cmkit(&[
        "batch", "--source", "gm:6", "--source", "gm:8", "--source", "gm:10",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn batch_sweep() {
    let mut args = vec!["batch"];
    let sources: Vec<String> = (6..=20).step_by(2).map(|m| format!("gm:{m}")).collect();
    for s in &sources {
        args.extend(["--source", s.as_str()]);
    }
    let out = cmkit(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for (row, s) in rows.iter().zip(&sources) {
        assert_eq!(row["request"]["source"], s.as_str());
        assert_eq!(row["report"]["status"], "CM_CERTIFIED");
        assert!(row["summary"].as_str().unwrap().starts_with(s.as_str()));
    }
}

#[test]
fn batch_errors_are_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "batch.json",
        r#"[{"command":"streit","source":"gm:6"},
            {"command":"explode","source":"gm:6"},
            {"command":"table","source":"gm:7"},
            {"command":"quotients","source":"gm:8"}]"#,
    );
    let out = cmkit(&["batch", &file]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["exit_code"], 1);
    let rows = v["rows"].as_array().unwrap();
    let codes: Vec<&Value> = rows.iter().map(|r| &r["exit_code"]).collect();
    assert_eq!(codes, vec![0, 1, 1, 0]);
    assert_eq!(rows[0]["report"]["streit_value"], 0);
    assert_eq!(rows[1]["error"]["code"], "UnknownCommand");
    assert_eq!(rows[2]["error"]["code"], "InvalidParameter");
    assert_eq!(rows[3]["report"]["genus"], 5);

    let table = cmkit(&["--format", "table", "batch", &file]);
    let lines = String::from_utf8(table.stdout).unwrap();
    assert_eq!(lines.lines().count(), 4);

    let empty = write(dir.path(), "empty.json", "[]");
    let out = cmkit(&["batch", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_code(&out), "EmptyBatch");
}

#[test]
fn batch_exit_code_is_maximum() {
    let out = cmkit(&[
        "--max-order",
        "30",
        "batch",
        "--source",
        "gm:6",
        "--source",
        "gm:8",
        "--source",
        "gm:7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows[0]["exit_code"], 0);
    assert_eq!(rows[1]["error"]["code"], "GroupTooLarge");
}

#[test]
fn table_format_renders() {
    let out = cmkit(&["--format", "table", "analyze", "gm:8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("genus        5"));
    assert!(text.contains("status       CM_CERTIFIED"));
}
