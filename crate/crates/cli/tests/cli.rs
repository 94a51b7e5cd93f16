use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn eqlines(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqlines"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = eqlines(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn bound_all_methods() {
    let v = json_ok(&["bound", "--n", "23", "--alpha", "1/3", "--method", "all"]);
    assert_eq!(v["command"], "bound");
    let reports = v["results"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0]["method"], "gerzon");
    assert_eq!(reports[0]["value"], "276");
    assert_eq!(reports[1]["method"], "lemmens_seidel");
    assert_eq!(reports[1]["applicable"], false);
    assert_eq!(reports[2]["method"], "okuda_yu");
    assert_eq!(reports[2]["value"], "58");
    assert_eq!(v["approximate"]["/results/reports/2/value"], 58.0);
}

#[test]
fn bound_single_methods() {
    let v = json_ok(&["bound", "--n", "23", "--alpha", "1/5", "--method", "ls"]);
    assert_eq!(v["results"]["reports"][0]["value"], "276");
    let v = json_ok(&["bound", "--n", "23", "--alpha", "0.2", "--method", "ls"]);
    assert_eq!(v["inputs"]["alpha"], "1/5");
    let v = json_ok(&["bound", "--n", "23", "--method", "gerzon"]);
    assert_eq!(v["results"]["reports"][0]["value"], "276");
}

#[test]
fn bound_input_errors_exit_2() {
    let out = eqlines(&["bound", "--n", "2", "--alpha", "1/3", "--method", "okuda-yu"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 3"));
    assert_eq!(eqlines(&["bound", "--n", "23", "--alpha", "x/3"]).status.code(), Some(2));
    assert_eq!(eqlines(&["bound", "--n", "23", "--method", "ls"]).status.code(), Some(2));
    assert_eq!(eqlines(&["bound", "--n", "23", "--alpha", "3/2", "--method", "ls"]).status.code(), Some(2));
}

#[test]
fn table_rows() {
    let v = json_ok(&["table", "--k-min", "2", "--k-max", "3", "--format", "json"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    let pick = |r: &Value| {
        (
            r["n_k"].as_u64().unwrap(),
            r["alpha_k"].as_str().unwrap().to_string(),
            r["bound"].as_str().unwrap().to_string(),
            r["tight_cardinality"].as_str().unwrap().to_string(),
            r["verdict"].as_bool().unwrap(),
        )
    };
    assert_eq!(pick(&rows[0]), (23, "1/3".into(), "58".into(), "100".into(), true));
    assert_eq!(pick(&rows[1]), (71, "1/5".into(), "416".into(), "876".into(), true));
}

#[test]
fn table_csv_matches_json() {
    let v = json_ok(&["table", "--k-min", "2", "--k-max", "12", "--format", "json"]);
    let out = eqlines(&["table", "--k-min", "2", "--k-max", "12", "--format", "csv"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows = v["results"]["rows"].as_array().unwrap();
    let mut count = 0;
    for (line, row) in lines.zip(rows) {
        count += 1;
        for (key, cell) in header.iter().zip(line.split(',')) {
            let expected = match (*key, &row[*key]) {
                ("verdict", Value::Bool(true)) => "nonexistent".to_string(),
                ("verdict", Value::Bool(false)) => "undecided".to_string(),
                (_, Value::String(s)) => s.clone(),
                (_, other) => other.to_string(),
            };
            assert_eq!(cell, expected, "column {key}");
        }
    }
    assert_eq!(count, rows.len());
    assert_eq!(count, 11);
}

#[test]
fn table_text_and_bad_range() {
    let out = eqlines(&["table", "--k-max", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("nonexistent"));
    assert_eq!(eqlines(&["table", "--k-min", "5", "--k-max", "4"]).status.code(), Some(2));
    assert_eq!(eqlines(&["table", "--k-min", "1"]).status.code(), Some(2));
}

#[test]
fn lp_minimal_with_proof() {
    let v = json_ok(&["lp", "--n", "23", "--alpha", "1/3", "--minimal", "--tol", "1/1048576"]);
    let r = &v["results"];
    assert_eq!(r["certified_upper"], "58");
    assert_eq!(r["lower"], "58");
    assert_eq!(r["closed_form"], "58");
    let upper = eqlines::parse_rational(r["upper"].as_str().unwrap()).unwrap();
    assert!(upper > eqlines::parse_rational("58").unwrap());
    assert!(upper <= eqlines::parse_rational("58").unwrap() + eqlines::parse_rational("1/1048576").unwrap());
    let c = &v["certificates"];
    assert_eq!(c["certificate_verified"], true);
    assert_eq!(c["proof"]["holds"], true);
    assert_eq!(c["proof"]["objective_max"], "58");
    assert_eq!(c["instance"]["constraints"].as_array().unwrap().len(), 7);
}

#[test]
fn lp_second_corollary_case() {
    let v = json_ok(&["lp", "--n", "71", "--alpha", "1/5", "--minimal"]);
    assert_eq!(v["results"]["certified_upper"], "416");
    assert_eq!(v["certificates"]["proof"]["holds"], true);
}

#[test]
fn lp_more_constraints_do_not_raise_the_bound() {
    let small = json_ok(&["lp", "--n", "23", "--alpha", "1/3", "--minimal", "--tol", "1/1024"]);
    let big = json_ok(&["lp", "--n", "23", "--alpha", "1/3", "--lmax-p", "4", "--lmax-s", "6", "--imax-s", "3", "--tol", "1/1024"]);
    let cu = |v: &Value| eqlines::parse_rational(v["results"]["certified_upper"].as_str().unwrap()).unwrap();
    assert!(cu(&big) <= cu(&small));
}

#[test]
fn lp_errors() {
    let out = eqlines(&["lp", "--n", "23", "--alpha", "1/3", "--minimal", "--max-pivots", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = eqlines(&["lp", "--n", "23", "--alpha", "1/3", "--minimal", "--beta", "-1/5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eqlines(&["lp", "--n", "2", "--alpha", "1/3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lp_negative_beta_parses() {
    let v = json_ok(&["lp", "--n", "23", "--alpha", "1/3", "--beta", "-1/3", "--lmax-p", "2", "--lmax-s", "3", "--imax-s", "1", "--tol", "1/64"]);
    assert_eq!(v["inputs"]["beta"], "-1/3");
}

#[test]
fn check_circle_pair() {
    let f = fixture("s1_pair.json");
    let v = json_ok(&["check", "--file", &f, "--t", "4"]);
    let r = &v["results"];
    assert_eq!(v["inputs"]["mode"], "approximate");
    assert_eq!(r["design"]["is_design"], true);
    assert_eq!(r["tightness"]["tight"], true);
    assert_eq!(r["tightness"]["contradiction"], false);
}

#[test]
fn check_simplex() {
    let f = fixture("simplex4_gram.json");
    let v = json_ok(&["check", "--file", &f, "--t", "2"]);
    assert_eq!(v["results"]["design"]["is_design"], true);
    assert_eq!(v["results"]["design"]["sum"], "0");
    assert_eq!(v["results"]["profile"]["values"], serde_json::json!(["-1/4"]));
}

#[test]
fn check_twenty_eight_lines() {
    let f = fixture("lines28_gram.json");
    let v = json_ok(&["check", "--file", &f]);
    let p = &v["results"]["profile"];
    assert_eq!(p["equiangular_with"], "1/3");
    assert_eq!(p["rank"], 7);
    assert_eq!(p["size"], 28);
}

#[test]
fn check_errors() {
    let out = eqlines(&["check", "--file", &fixture("bad_entry.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[1][0]"));
    let out = eqlines(&["check", "--file", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"gram": [["1", "2"], ["2", "1"]]}"#).unwrap();
    let out = eqlines(&["check", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positive semidefinite"));
}

#[test]
fn text_formats() {
    let out = eqlines(&["bound", "--n", "23", "--alpha", "1/3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("okuda_yu") && text.contains("58"));
    let out = eqlines(&["check", "--file", &fixture("lines28_gram.json"), "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("equiangular      1/3"));
}

#[test]
fn deterministic_modulo_timing() {
    let args = ["table", "--k-min", "2", "--k-max", "20", "--format", "json"];
    let a = strip_timing(json_ok(&args));
    let b = strip_timing(json_ok(&args));
    assert_eq!(a, b);
    let mut seq: Vec<&str> = args.to_vec();
    seq.push("--sequential");
    let mut c = strip_timing(json_ok(&seq));
    c["invocation"] = a["invocation"].clone();
    assert_eq!(a, c);
}

#[test]
fn exact_values_round_trip() {
    let v = json_ok(&["bound", "--n", "3", "--alpha", "9/10", "--method", "okuda-yu"]);
    let s = v["results"]["reports"][0]["value"].as_str().unwrap();
    assert_eq!(s, "20521/6831");
    let r = eqlines::parse_rational(s).unwrap();
    assert_eq!(eqlines::RationalExt::to_exact_string(&r), s);
}
