use std::process::Command;

use ietlab::cli::{run, EXIT_COMPUTE, EXIT_CONFIG, EXIT_OK};
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ietlab"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn perm_reports_facts() {
    let v = json(&["perm", "3 2 1"]);
    assert_eq!(v["permutation"]["irreducible"], true);
    assert_eq!(v["permutation"]["type_w"], true);
    assert_eq!(v["permutation"]["loop_through_zero"], serde_json::json!([0, 2]));
    assert!(v["theorem"]["note"].as_str().unwrap().starts_with("main theorem applies"));

    let v = json(&["perm", "2 1 3"]);
    assert_eq!(v["permutation"]["irreducible"], false);
    assert!(!v["theorem"]["note"].as_str().unwrap().contains("main theorem applies"));

    let v = json(&["perm", "1"]);
    assert_eq!(v["permutation"]["type_w"], Value::Null);
    assert!(v["permutation"]["type_w_note"].is_string());
}

#[test]
fn analyze_golden_and_third() {
    let v = json(&["analyze", "golden"]);
    assert_eq!(v["idoc"]["status"], "pass");
    assert_eq!(v["linear_recurrence"]["min_n_eps_n"]["exact"], "-2+sqrt(5)");
    assert!(v["linear_recurrence"]["status"].as_str().unwrap().contains("finite evidence only"));
    assert!(v["rigidity"]["caveat"].as_str().unwrap().contains("does not certify mild mixing"));

    let v = json(&["analyze", "third", "--N", "10"]);
    assert_eq!(v["idoc"]["status"], "failure");
    assert_eq!(v["idoc"]["n"], 3);
    assert_eq!(v["rigidity"]["summary"], "rigidity candidates found up to N = 10");
}

#[test]
fn fhz_is_type_w_and_theorem_applies() {
    let v = json(&["analyze", "fhz", "--N", "50"]);
    assert_eq!(v["permutation"]["type_w"], true);
    assert_eq!(v["theorem"]["hypotheses_certified"], true);
    assert_eq!(v["rigidity"]["summary"], "no rigidity sequence detected up to N = 50");
}

#[test]
fn missing_lengths_is_one_config_error() {
    let (code, _, err) = invoke(&["analyze", "--perm", "3 2 1"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("(1 problem)"), "{err}");
    assert!(err.contains("lengths: missing"));
}

#[test]
fn config_errors_are_aggregated() {
    let (code, _, err) = invoke(&["eps", "3 2 1", "--lengths", "1/2,1/2", "--N", "x", "--format", "yaml"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("(3 problems)"), "{err}");
}

#[test]
fn unknown_flag_is_config_error() {
    let (code, _, _) = invoke(&["perm", "--bogus"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn catalog_lists_bundled_entries() {
    let v = json(&["catalog"]);
    let entries = v["catalog"]["entries"].as_array().unwrap();
    assert!(entries.len() >= 3);
    let fhz = entries.iter().find(|e| e["name"] == "fhz").unwrap();
    assert_eq!(fhz["type_w"], true);
}

#[test]
fn catalog_file_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("ietlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dup.txt");
    std::fs::write(&path, "a: 2 1 ; 1/2, 1/2\na: 2 1\n").unwrap();
    let (code, _, err) = invoke(&["catalog", "--catalog", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("line 2: duplicate name"), "{err}");
}

#[test]
fn csv_formats_and_side_files() {
    let (code, out, _) = invoke(&["rigidity", "third", "--N", "6", "--eps", "1/10", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("n,measure,is_candidate,measure_decimal\n"));
    assert!(out.contains("\n3,0,true,"));

    let dir = std::env::temp_dir().join(format!("ietlab-side-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("golden.json");
    let (code, out, _) = invoke(&["analyze", "golden", "--N", "20", "--out", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(dir.join("golden.linrec.csv")).unwrap();
    assert_eq!(text.lines().count(), 21);
    assert!(dir.join("golden.rigidity.csv").exists());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["side_files"]["rigidity"].as_str().unwrap().ends_with("golden.rigidity.csv"));
}

#[test]
fn config_file_and_write_failure() {
    let dir = std::env::temp_dir().join(format!("ietlab-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"perm": "2 1", "lengths": ["1", "2"], "normalize": true, "N": 4}"#).unwrap();
    let v = json(&["eps", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["input"]["lengths"][0]["exact"], "1/3");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);

    let (code, _, _) = invoke(&["eps", "golden", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(code, EXIT_COMPUTE);
}

#[test]
fn sample_mode_is_seeded() {
    let a = json(&["eps", "4 3 2 1", "--sample", "--seed", "11", "--N", "5"]);
    let b = json(&["eps", "4 3 2 1", "--sample", "--seed", "11", "--N", "5"]);
    assert_eq!(a, b);
    assert_eq!(a["input"]["source"], "sample(seed=11)");
}

#[test]
fn tower_reports_disjoint_towers() {
    let v = json(&["tower", "fhz", "--N", "20"]);
    for t in v["cell_towers"].as_array().unwrap() {
        assert_eq!(t["disjoint"], true);
        assert_eq!(t["height_bound_holds"], true);
    }
    let loops = v["loop_towers"]["towers"].as_array().unwrap();
    assert_eq!(loops.len(), 2);
    let v = json(&["tower", "golden", "--N", "5"]);
    assert!(v["loop_towers"]["unavailable"].as_str().unwrap().contains("not type W"));
}

#[test]
fn binary_honours_catalog_env_and_exit_codes() {
    let dir = std::env::temp_dir().join(format!("ietlab-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cat.txt");
    std::fs::write(&path, "half: 2 1 ; 1/2, 1/2\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_ietlab");
    let output = Command::new(bin)
        .args(["analyze", "half", "--N", "5"])
        .env("IETLAB_CATALOG", &path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let v: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(v["idoc"]["status"], "failure");

    let output = Command::new(bin).args(["analyze", "golden"]).env("IETLAB_CATALOG", &path).output().unwrap();
    assert_eq!(output.status.code(), Some(EXIT_CONFIG));
}
