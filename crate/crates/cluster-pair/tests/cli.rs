//! End-to-end tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn cluster_pair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-pair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).unwrap();
}

#[test]
fn gen_writes_labels_and_prints_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("labels.txt");
    let out = cluster_pair(&[
        "gen",
        "--mode",
        "balanced",
        "--communities",
        "3",
        "--rows",
        "9",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let labels: Vec<u32> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(labels.len(), 9);
    assert!(labels.iter().all(|&l| l < 3));
    assert!(stdout(&out).contains("cluster size mean"));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.txt");
    let second = dir.path().join("b.txt");
    for path in [&first, &second] {
        let out = cluster_pair(&[
            "gen",
            "--mode",
            "unbalanced",
            "--communities",
            "20",
            "--rows",
            "5000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn gen_unbalanced_prints_expected_std() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("labels.txt");
    let out = cluster_pair(&[
        "gen",
        "--mode",
        "unbalanced",
        "--communities",
        "100",
        "--rows",
        "100000",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let std_value: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("cluster size mean: "))
        .and_then(|rest| rest.split("std: ").nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((424.0..=574.0).contains(&std_value), "std {std_value}");
}

#[test]
fn gen_seed_from_entropy_prints_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("labels.txt");
    let out = cluster_pair(&[
        "gen",
        "--mode",
        "balanced",
        "--communities",
        "2",
        "--rows",
        "4",
        "--seed-from-entropy",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("seed: "), "{}", stdout(&out));
}

#[test]
fn pair_identical_files_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.txt");
    write(&labels, "0\n0\n1\n1\n2\n2\n");
    for method in ["smbp", "mwm", "mmm"] {
        let out = cluster_pair(&[
            "pair",
            "--a",
            labels.to_str().unwrap(),
            "--b",
            labels.to_str().unwrap(),
            "--method",
            method,
            "--with-mwm",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        assert!(text.contains("accuracy vs mwm: 1.000000"), "{method}: {text}");
        assert!(text.contains("pairs: 3"), "{method}: {text}");
        assert!(text.contains("weight sum: 6"), "{method}: {text}");
    }
}

#[test]
fn pair_writes_report_record() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.txt");
    write(&labels, "0\n1\n0\n1\n");
    let report = dir.path().join("report.jsonl");
    let out = cluster_pair(&[
        "pair",
        "--a",
        labels.to_str().unwrap(),
        "--b",
        labels.to_str().unwrap(),
        "--method",
        "smbp",
        "--with-mwm",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(record["method"], "smbp");
    assert_eq!(record["accuracy_mean"], 1.0);
    assert_eq!(record["baseline"], "mwm");
    assert_eq!(record["proposer"], "row");
}

#[test]
fn pair_missing_file_names_path() {
    let out = cluster_pair(&[
        "pair",
        "--a",
        "/no/such/labels.txt",
        "--b",
        "/no/such/labels.txt",
        "--method",
        "smbp",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("/no/such/labels.txt"), "{}", stderr(&out));
}

#[test]
fn pair_length_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    write(&a, "0\n1\n0\n1\n0\n");
    write(&b, "0\n1\n0\n1\n0\n1\n");
    let out = cluster_pair(&[
        "pair",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--method",
        "mwm",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("different point counts"), "{}", stderr(&out));
}

#[test]
fn pair_reads_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("iris.csv");
    write(&a, "sepal,species\n1.0,setosa\n1.1,setosa\n5.0,virginica\n");
    let out = cluster_pair(&[
        "pair",
        "--a",
        a.to_str().unwrap(),
        "--b",
        a.to_str().unwrap(),
        "--method",
        "smbp",
        "--with-mwm",
        "--label-format",
        "csv",
        "--csv-column",
        "species",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("accuracy vs mwm: 1.000000"));
}

#[test]
fn pair_force_k_declares_empty_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.txt");
    write(&labels, "0\n1\n");
    let out = cluster_pair(&[
        "pair",
        "--a",
        labels.to_str().unwrap(),
        "--b",
        labels.to_str().unwrap(),
        "--method",
        "mwm",
        "--force-k",
        "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("pairs: 5"), "{}", stdout(&out));
    assert!(stdout(&out).contains("weight sum: 2"), "{}", stdout(&out));
}

#[test]
fn contingency_writes_expected_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    // direct pair-counting oracle over the 5 points gives
    // [[1,1,0],[1,1,0],[0,0,1]]
    write(&a, "0\n0\n1\n1\n2\n");
    write(&b, "0\n1\n1\n0\n2\n");
    let out_path = dir.path().join("m.csv");
    let out = cluster_pair(&[
        "contingency",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "c0,c1,c2\n1,1,0\n1,1,0\n0,0,1\n"
    );
}

#[test]
fn contingency_identical_files_are_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    write(&a, "0\n0\n1\n2\n2\n2\n");
    let out_path = dir.path().join("m.csv");
    let out = cluster_pair(&[
        "contingency",
        "--a",
        a.to_str().unwrap(),
        "--b",
        a.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "c0,c1,c2\n2,0,0\n0,1,0\n0,0,3\n"
    );
}

#[test]
fn contingency_length_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    write(&a, "0\n1\n2\n1\n0\n");
    write(&b, "0\n1\n2\n1\n0\n2\n");
    let out = cluster_pair(&[
        "contingency",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--out",
        dir.path().join("m.csv").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn bench_small_suite_completes_with_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.jsonl");
    let out = cluster_pair(&[
        "bench",
        "--suite",
        "small",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    let records: Vec<serde_json::Value> =
        text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // 3 dataset-type conditions x 3 methods
    assert_eq!(records.len(), 9);
    for record in &records {
        assert_eq!(record["schema_version"], 1);
        assert_eq!(record["timed_out"], false);
        let accuracy = record["accuracy_mean"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&accuracy));
    }
    let table = stdout(&out);
    assert!(table.contains("Maximum Weighted Matching"));
    assert!(table.contains("Stable Matching Based Pairing"));
    assert!(table.contains("1±0"));
}

#[test]
fn bench_respects_threads_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.jsonl");
    let threaded = dir.path().join("threaded.jsonl");
    let run = |out_path: &Path, env: Option<(&str, &str)>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cluster-pair"));
        cmd.args([
            "bench",
            "--suite",
            "small",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        if let Some((k, v)) = env {
            cmd.env(k, v);
        }
        cmd.output().unwrap()
    };
    assert!(run(&single, None).status.success());
    assert!(run(&threaded, Some(("CLUSTER_PAIR_THREADS", "4"))).status.success());
    let accuracy_fields = |path: &Path| -> Vec<(String, String)> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                (v["accuracy_mean"].to_string(), v["accuracy_std"].to_string())
            })
            .collect()
    };
    // chunked contingency construction must not change any result
    assert_eq!(accuracy_fields(&single), accuracy_fields(&threaded));
}

#[test]
fn bench_time_limit_flag_marks_rows_timed_out() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    write(
        &spec,
        r#"{
            "name": "tiny",
            "first_source": {"generator": {"mode": "balanced", "communities": 30, "rows": 20000}},
            "second_source": {"generator": {"mode": "balanced", "communities": 30, "rows": 20000}},
            "methods": ["mwm", "smbp", "mmm"],
            "iterations": 1,
            "base_seed": 1
        }"#,
    );
    let report = dir.path().join("report.jsonl");
    let out = cluster_pair(&[
        "bench",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--time-limit",
        "0.000001",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["timed_out"], true, "{record}");
        assert_eq!(record["accuracy_mean"], serde_json::Value::Null);
        assert_eq!(record["time_limit_seconds"], 0.000001);
    }
    assert!(stdout(&out).contains("Do not finish"), "{}", stdout(&out));
}

#[test]
fn bench_spec_file_with_cr_but_no_features_fails() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    write(
        &spec,
        r#"{
            "name": "bad",
            "first_source": {"generator": {"mode": "balanced", "communities": 5, "rows": 100}},
            "second_source": {"generator": {"mode": "balanced", "communities": 5, "rows": 100}},
            "methods": ["cr"],
            "iterations": 1,
            "base_seed": 1
        }"#,
    );
    let report = dir.path().join("report.jsonl");
    let out = cluster_pair(&[
        "bench",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let text = std::fs::read_to_string(&report).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(record["error"].as_str().unwrap().contains("feature source"));
}

#[test]
fn bench_spec_file_with_cr_and_features_reports_all_methods() {
    let dir = tempfile::tempdir().unwrap();
    let features = dir.path().join("features.csv");
    let mut rows = String::new();
    let mut state = 9u64;
    for _ in 0..200 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
        rows.push_str(&format!("{:.3},{:.3}\n", (state >> 11) as f64 / 1e18, (state >> 7) as f64 / 1e18));
    }
    write(&features, &rows);
    let spec = dir.path().join("spec.json");
    write(
        &spec,
        &format!(
            r#"{{
                "name": "with-cr",
                "first_source": {{"generator": {{"mode": "balanced", "communities": 4, "rows": 200}}}},
                "second_source": {{"generator": {{"mode": "balanced", "communities": 4, "rows": 200}}}},
                "methods": ["mwm", "smbp", "cr", "mmm"],
                "iterations": 2,
                "base_seed": 3,
                "features": {}
            }}"#,
            serde_json::to_string(features.to_str().unwrap()).unwrap()
        ),
    );
    let report = dir.path().join("report.jsonl");
    let out = cluster_pair(&[
        "bench",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&report).unwrap();
    let methods: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["method"]
            .as_str()
            .unwrap()
            .to_string())
        .collect();
    assert_eq!(methods, vec!["mwm", "smbp", "cr", "mmm"]);
}
