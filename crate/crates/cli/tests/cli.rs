use std::path::Path;
use std::process::{Command, Output};

fn skewprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_lists_the_q2_trivial_tuple() {
    let o = skewprod(&["params", "--family", "Q2", "--n", "2", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let tuples: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let list = tuples.as_array().unwrap();
    assert!(list.iter().any(|t| t["params"]["w"] == 0));
}

#[test]
fn build_then_classify_d1_is_case_one() {
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("d1.jsonl");
    let report = dir.path().join("d1.json");
    let csv = dir.path().join("d1.csv");
    let o = skewprod(&[
        "build",
        "--family",
        "D1",
        "--n",
        "2-4",
        "--m",
        "2-4",
        "--out",
        path(&census),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = skewprod(&[
        "classify",
        "--input",
        path(&census),
        "--out",
        path(&report),
        "--csv",
        path(&csv),
    ]);
    assert_eq!(code(&o), 0);
    let mut rows = csv::Reader::from_path(&csv).unwrap();
    let mut count = 0;
    for row in rows.records() {
        let row = row.unwrap();
        assert_eq!(&row[6], "1", "{row:?}");
        count += 1;
    }
    assert_eq!(
        count,
        std::fs::read_to_string(&census).unwrap().lines().count()
    );
}

#[test]
fn invalid_tuples_exit_one_with_clauses() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    std::fs::write(
        &input,
        r#"{"family":"D1","n":3,"m":3,"params":{"r":1,"s":1,"t":2,"u":0,"v":2}}"#,
    )
    .unwrap();
    let o = skewprod(&["build", "--input", path(&input)]);
    assert_eq!(code(&o), 1);
    let first = String::from_utf8_lossy(&o.stderr)
        .lines()
        .next()
        .unwrap()
        .to_string();
    let anomaly: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(anomaly["anomaly"], "invalid");
    assert!(!anomaly["detail"]["clauses"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_output_ignores_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    let two = dir.path().join("two.jsonl");
    for (w, out) in [("1", &one), ("2", &two)] {
        let o = skewprod(&[
            "oracle",
            "--flavor",
            "dihedral",
            "--bound",
            "36",
            "--workers",
            w,
            "--out",
            path(out),
        ]);
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(&one).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&two).unwrap());
}

#[test]
fn verify_and_report_on_an_oracle_census() {
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("q.jsonl");
    let o = skewprod(&[
        "oracle",
        "--flavor",
        "quaternion",
        "--bound",
        "32",
        "--out",
        path(&census),
    ]);
    assert_eq!(code(&o), 0);
    let o = skewprod(&["verify", "--input", path(&census)]);
    assert_eq!(code(&o), 0);
    let flags: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(flags.as_array().unwrap().iter().all(|f| f["ok"] == true));
    let o = skewprod(&["report", "--input", path(&census)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("0 findings"));
}

#[test]
fn crosscheck_to_48_is_clean() {
    let o = skewprod(&["crosscheck", "--flavor", "dihedral", "--bound", "48"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let reports: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a4 = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["n"] == 2 && r["m"] == 3)
        .unwrap();
    assert_eq!(a4["matching"].as_array().unwrap().len(), 1);
}

#[test]
fn config_files_drive_runs() {
    let dir = tempfile::tempdir().unwrap();
    let toml_cfg = dir.path().join("run.toml");
    let json_cfg = dir.path().join("run.json");
    std::fs::write(
        &toml_cfg,
        "command = \"oracle\"\nflavor = \"dihedral\"\nn = \"2-3\"\nm = 3\noracle_bound = 48\n",
    )
    .unwrap();
    std::fs::write(
        &json_cfg,
        r#"{"command":"oracle","flavor":"dihedral","n":"2-3","m":3,"oracle_bound":48}"#,
    )
    .unwrap();
    let a = skewprod(&["--config", path(&toml_cfg)]);
    let b = skewprod(&["--config", path(&json_cfg)]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn exit_codes_separate_usage_from_bounds() {
    assert_eq!(code(&skewprod(&["oracle", "--bound", "0"])), 1);
    assert_eq!(code(&skewprod(&["classify"])), 1);
    assert_eq!(code(&skewprod(&["frobnicate"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "command = \"oracle\"\nconstruct_bound = 48\noracle_bound = 96\n",
    )
    .unwrap();
    assert_eq!(code(&skewprod(&["--config", path(&cfg)])), 1);
    let o = skewprod(&[
        "oracle", "--flavor", "dihedral", "--n", "8", "--m", "8", "--bound", "48",
    ]);
    assert_eq!(code(&o), 2);
}
