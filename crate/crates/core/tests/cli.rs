use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_green-ideals")).args(args).env_remove("GREEN_IDEALS_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn idempotents_of_c2() {
    let v = json(&["idempotents", "--functor", "burnside", "--group", "C2"]);
    assert_eq!(v["schema"], 1);
    let values: Vec<&str> = v["groups"][0]["idempotents"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, vec!["1/2 [C2/1]", "[C2/C2] - 1/2 [C2/1]"]);
    assert_eq!(v["groups"][0]["checks"]["orthogonal"], true);
    assert_eq!(v["groups"][0]["checks"]["complete"], true);
    let one = json(&["idempotents", "--group", "1"]);
    assert_eq!(one["groups"][0]["idempotents"][0]["value"], "[1/1]");
    let slice = json(&["idempotents", "--functor", "slice", "--group", "C2"]);
    assert_eq!(slice["groups"][0]["idempotents"].as_array().unwrap().len(), 3);
}

#[test]
fn detection_scans() {
    assert_eq!(json(&["bgroups", "--max-order", "4"])["groups"], serde_json::json!(["1", "V4"]));
    let mc = json(&["mc-groups", "--functor", "slice", "--max-order", "2"]);
    assert!(mc["groups"].as_array().unwrap().contains(&Value::from("C2")));
    let burnside = json(&["mc-groups", "--max-order", "2"]);
    assert_eq!(burnside["groups"], serde_json::json!(["1"]));
    assert_eq!(json(&["t-slices", "--group", "1"])["witnesses"]["1"], serde_json::json!(["(1,1)"]));
    let bk = json(&["bk-groups", "--functor", "shifted:C2", "--max-order", "2"]);
    assert_eq!(bk["groups"], serde_json::json!(["1", "C2"]));
}

#[test]
fn posets_and_ideals() {
    let dot = stdout(&run(&["poset", "--functor", "burnside", "--max-order", "4", "--format", "dot"]));
    assert_eq!(dot.matches(" -> ").count(), 1);
    assert!(dot.contains("\"V4:e_4\" -> \"1:e_0\""));
    let p = json(&["poset", "--max-order", "1"]);
    assert_eq!(p["nodes"], serde_json::json!(["1:e_0"]));
    assert_eq!(p["bound"], 1);
    let ideals = json(&["ideals", "--functor", "burnside", "--max-order", "4"]);
    let list = ideals["ideals"].as_array().unwrap();
    assert_eq!(list.len(), 3);
    for i in list {
        assert_eq!(i["generators"], i["theta"]);
    }
}

#[test]
fn verify_exit_codes() {
    for args in [&["verify", "--max-order", "1"][..], &["verify", "--functor", "burnside", "--max-order", "8"], &["verify", "--functor", "slice", "--max-order", "6"]] {
        let v = json(args);
        assert_eq!(v["failures"], serde_json::json!([]));
        assert!(v["cases"].as_u64().unwrap() > 0);
    }
}

#[test]
fn error_exit_codes() {
    assert_eq!(run(&["idempotents", "--group", "Z5"]).status.code(), Some(2));
    assert_eq!(run(&["idempotents"]).status.code(), Some(2));
    assert_eq!(run(&["bgroups", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(run(&["poset", "--functor", "shifted:"]).status.code(), Some(2));
    assert_eq!(run(&["bk-groups"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["bgroups", "--max-order", "500"]).status.code(), Some(3));
    assert_eq!(run(&["bgroups", "--max-order", "8", "--caps", "base=4"]).status.code(), Some(3));
    assert_eq!(run(&["bgroups", "--caps", "width=4"]).status.code(), Some(2));
    assert_eq!(run(&["ideals", "--max-order", "8", "--caps", "closed_sets=2"]).status.code(), Some(3));
    assert_eq!(run(&["ideals", "--max-order", "8", "--caps", "closed_sets=3"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["ideals", "--functor", "slice", "--max-order", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let tsv = ["verify", "--max-order", "4", "--format", "tsv"];
    assert_eq!(run(&tsv).stdout, run(&tsv).stdout);
}

#[test]
fn out_file_cache_and_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("poset.json");
    let o = run(&["poset", "--max-order", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["nodes"].as_array().unwrap().len(), 2);

    let cache = dir.path().join("cache");
    let cached = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_green-ideals")).args(args).env("GREEN_IDEALS_CACHE", &cache).output().unwrap()
    };
    let first = cached(&["bgroups", "--max-order", "6"]);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(cached(&["bgroups", "--max-order", "6"]).stdout, first.stdout);
    cached(&["bgroups", "--max-order", "4"]);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);

    // the Klein group again, as permutations of four points
    let file = dir.path().join("groups.json");
    std::fs::write(&file, r#"[{"name": "Klein", "degree": 4, "generators": [[1,0,3,2],[2,3,0,1]]}]"#).unwrap();
    let f = file.to_str().unwrap();
    let b = json(&["bgroups", "--max-order", "4", "--group-file", f]);
    assert_eq!(b["groups"], serde_json::json!(["1", "V4", "Klein"]));
    let e = json(&["idempotents", "--group", "Klein", "--group-file", f]);
    assert_eq!(e["groups"][0]["idempotents"].as_array().unwrap().len(), 5);
    let cat = json(&["catalog", "--group-file", f]);
    assert!(cat["groups"].as_array().unwrap().iter().any(|g| g["name"] == "Klein" && g["source"] == "user"));
    std::fs::write(&file, r#"[{"name": "Bad", "degree": 3, "generators": [[0,0,1]]}]"#).unwrap();
    assert_eq!(run(&["catalog", "--group-file", f]).status.code(), Some(2));
}
