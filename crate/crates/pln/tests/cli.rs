use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pln")).args(args).env_remove("PLN_MAX_GROUP_ORDER").output().expect("run pln")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn assert_schema(schema_file: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn dims_tables_for_builtin_pairs() {
    let o = pln(&["dims", "--pair", "S3:S2", "--depth", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_schema("dims.schema.json", &v);
    let formula: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["formula"].as_u64().unwrap()).collect();
    assert_eq!(formula, [1, 2, 5, 14, 41]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["formula"], row["burnside"]);
        assert_eq!(row["burnside"], row["matrix_model"]);
        assert_eq!(row["matrix_model"], row["loop_model"]);
    }

    let o = pln(&["dims", "--pair", "S3:A3", "--depth", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let col: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    assert_eq!(col, ["1", "2", "4", "8", "16"]);

    let o = pln(&["dims", "--pair", "C4:C2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("pass").count(), 4);
}

#[test]
fn verify_passes_and_reports_validate() {
    for args in [["--pair", "S3:S2", "--depth", "5"], ["--pair", "S4:S3", "--depth", "4"], ["--pair", "C1:C1", "--depth", "3"]] {
        let mut full = vec!["verify", "--format", "json", "--samples", "10"];
        full.extend(args);
        let o = pln(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v = json(&o);
        assert_schema("verify.schema.json", &v);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn verify_failure_exits_one_with_a_json_report() {
    let o = Command::new(env!("CARGO_BIN_EXE_pln"))
        .args(["verify", "--pair", "C6:C1", "--depth", "2", "--samples", "2"])
        .env("PLN_MAX_GROUP_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_schema("verify.schema.json", &report);
    assert_eq!(report["passed"], false);
    assert!(report["errors"][0].as_str().unwrap().starts_with("sandwich"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--pair", "S3:S2", "--depth", "3", "--format", "json", "--seed", "9"];
    assert_eq!(stdout(&pln(&args)), stdout(&pln(&args)));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pln(&["dims", "--pair", "S3:S5"]).status.code(), Some(2));
    assert_eq!(pln(&["dims", "--pair", "S3:S2", "--depth", "0"]).status.code(), Some(2));
    assert_eq!(pln(&["dims", "--pair", "S3:S2", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(pln(&["basis", "--pair", "S3:S2", "--color", "x"]).status.code(), Some(2));
    assert_eq!(pln(&["dims", "--group-file", "/nonexistent/group.txt"]).status.code(), Some(2));
    assert_eq!(pln(&["eval", "--pair", "S3:S2", "--expr", "mult(x2, x3)"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_pln")).args(["dims"]).env("PLN_MAX_GROUP_ORDER", "many").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_pln")).args(["dims", "--pair", "S4:S3"]).env("PLN_MAX_GROUP_ORDER", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bases_in_both_models() {
    let o = pln(&["basis", "--pair", "S3:S2", "--color", "2", "--format", "json"]);
    let v = json(&o);
    assert_schema("basis.schema.json", &v);
    assert_eq!(v["dimension"], 2);
    let o = pln(&["basis", "--pair", "S3:S2", "--color", "2", "--side", "matrix", "--format", "json"]);
    let v = json(&o);
    assert_schema("basis.schema.json", &v);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn group_and_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("s3.txt");
    std::fs::write(&group, "group { generators = [\"(1 2)\", \"(1 2 3)\"] }\nsubgroup { generators = [\"(1 2)\"] }\n").unwrap();
    let o = pln(&["dims", "--group-file", group.to_str().unwrap(), "--depth", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4,14,14,14,14,pass"));

    let graph = dir.path().join("a3.txt");
    std::fs::write(&graph, "even: a b\nodd: x\nedge: a x\nedge: b x\nspin: x = 2^(1/4)\n").unwrap();
    let o = pln(&["basis", "--graph-file", graph.to_str().unwrap(), "--color", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["dimension"], 2);
}

#[test]
fn eval_matches_through_phi() {
    let o = pln(&["eval", "--pair", "S3:S2", "--expr", "jones(2)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_schema("eval.schema.json", &v);
    let r = &v["results"][0];
    assert_eq!(r["status"], "pass");
    assert_eq!(r["phi_of_matrix"], r["loop_value"]);

    let dir = tempfile::tempdir().unwrap();
    let exprs = dir.path().join("exprs.txt");
    std::fs::write(&exprs, "# composites\ncondE1/d(mult(y, incl(x2)))\nmult(condE(y), jones(2))\n").unwrap();
    let bindings = dir.path().join("b.json");
    std::fs::write(&bindings, r#"{"y": {"color": "3", "coefficients": ["1", "0", "-1/2", "2", "1"]}}"#).unwrap();
    let o = pln(&[
        "eval",
        "--pair",
        "S3:S2",
        "--expr-file",
        exprs.to_str().unwrap(),
        "--bindings",
        bindings.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["results"].as_array().unwrap().len(), 2);
}
