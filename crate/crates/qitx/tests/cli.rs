use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qitx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qitx")).current_dir(dir).args(args).output().expect("spawn qitx")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("pure.json", r#"{"kind": "pauli", "c": [1, 0.6, 0.0, 0.8]}"#),
        ("mixed.json", r#"{"kind": "pauli", "c": [1, 0.3, -0.2, 0.4]}"#),
        ("w05.json", r#"{"kind": "werner", "x": 0.5}"#),
        ("w07.json", r#"{"kind": "werner", "x": 0.7}"#),
        ("w0.json", r#"{"kind": "werner", "x": 0.0}"#),
        (
            "product.json",
            r#"{"kind": "correlation", "r": [[1, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#,
        ),
        ("broken.json", "{\"kind\": \"pauli\",\n \"c\": [1, 0.1, "),
        ("outside.json", r#"{"kind": "pauli", "c": [1, 0.9, 0.9, 0.9]}"#),
        ("short.json", r#"{"kind": "pauli", "c": [1, 0.1]}"#),
    ];
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn malformed_json_exits_2() {
    let d = workspace();
    let out = qitx(d.path(), &["transmit", "--input-c", "broken.json", "--channel", "w05.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    let out = qitx(d.path(), &["transmit", "--input-c", "short.json", "--channel", "w05.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unphysical_input_exits_3() {
    let d = workspace();
    let out = qitx(d.path(), &["transmit", "--input-c", "outside.json", "--channel", "w05.json"]);
    assert_eq!(code(&out), 3);
    fs::write(d.path().join("wbad.json"), r#"{"kind": "werner", "x": 1.5}"#).unwrap();
    let out = qitx(d.path(), &["discord", "--channel", "wbad.json"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn missing_file_is_not_a_physics_error() {
    let d = workspace();
    let out = qitx(d.path(), &["rank", "--channel", "nope.json"]);
    assert_ne!(code(&out), 0);
    assert_ne!(code(&out), 3);
}

#[test]
fn werner_transmission_recovers_pure_input() {
    let d = workspace();
    let v = json(&qitx(d.path(), &["transmit", "--input-c", "pure.json", "--channel", "w05.json"]));
    assert_eq!(v["degraded"], false);
    assert_eq!(v["security_form"], true);
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 4);
    for o in outcomes {
        assert_eq!(o["status"], "reconstructed");
        assert!((f(&o["probability"]) - 0.25).abs() < 1e-12);
        let c = o["reconstruction"].as_array().unwrap();
        for (got, want) in c.iter().zip([0.6, 0.0, 0.8]) {
            assert!((f(got) - want).abs() < 1e-9);
        }
        assert!((f(&o["cond"]) - 2.0).abs() < 1e-9);
    }
    assert!(f(&v["max_error"]) < 1e-9);
    assert!((f(&v["probability_sum"]) - 1.0).abs() < 1e-12);
}

#[test]
fn product_channel_degrades_with_exit_0() {
    let d = workspace();
    let v = json(&qitx(d.path(), &["transmit", "--input-c", "mixed.json", "--channel", "product.json"]));
    assert_eq!(v["degraded"], true);
    assert_eq!(v["rank"]["rank"], 1);
    assert!(v["max_error"].is_null());
    for o in v["outcomes"].as_array().unwrap() {
        assert_eq!(o["status"], "rank_deficient");
        assert!(o["reconstruction"].is_null());
    }
}

#[test]
fn rank_of_werner() {
    let d = workspace();
    let v = json(&qitx(d.path(), &["rank", "--channel", "w05.json"]));
    assert_eq!(v["rank"], 4);
    let sv: Vec<f64> = v["singular_values"].as_array().unwrap().iter().map(f).collect();
    for (got, want) in sv.iter().zip([1.0, 0.5, 0.5, 0.5]) {
        assert!((got - want).abs() < 1e-10, "{sv:?}");
    }
}

#[test]
fn security_of_werner() {
    let d = workspace();
    let v = json(&qitx(d.path(), &["security", "--channel", "w07.json"]));
    assert_eq!(v["security_form"], true);
    // A bias on B alone leaves the outcome probabilities flat.
    let v = json(&qitx(d.path(), &["security", "--channel", "product.json"]));
    assert_eq!(v["security_form"], true);
    fs::write(
        d.path().join("biased.json"),
        r#"{"kind": "correlation", "r": [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0]]}"#,
    )
    .unwrap();
    let v = json(&qitx(d.path(), &["security", "--channel", "biased.json"]));
    assert_eq!(v["security_form"], false);
}

#[test]
fn discord_both_sides() {
    let d = workspace();
    let a = json(&qitx(d.path(), &["discord", "--channel", "w05.json"]));
    let b = json(&qitx(d.path(), &["discord", "--channel", "w05.json", "--side", "B"]));
    assert_eq!(a["measured_side"], "A");
    assert_eq!(b["measured_side"], "B");
    for v in [&a, &b] {
        assert!((f(&v["discord"]) - 0.26248318376373433).abs() < 1e-4);
        assert!((f(&v["mutual_information"]) - 0.45120505930460147).abs() < 1e-10);
    }
    assert!((f(&a["concurrence"]) - 0.25).abs() < 1e-10);
}

#[test]
fn werner_sweep_csv() {
    let d = workspace();
    let out = qitx(d.path(), &["sweep-werner", "--out", "sweep.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.path().join("sweep.csv.meta.json").exists());
    let mut reader = csv::Reader::from_path(d.path().join("sweep.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_owned).collect();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 21);
    for row in &rows {
        let x: f64 = row[col("x")].parse().unwrap();
        let conc: f64 = row[col("concurrence")].parse().unwrap();
        let disc: f64 = row[col("discord")].parse().unwrap();
        if x <= 1.0 / 3.0 {
            assert_eq!(conc, 0.0, "x = {x}");
        }
        if x > 0.0 {
            assert!(disc > 0.0, "x = {x}");
            assert_eq!(&row[col("rank")], "4");
            let cond: f64 = row[col("cond")].parse().unwrap();
            assert!((cond * x - 1.0).abs() < 1e-9);
        }
        assert_eq!(&row[col("equal_prob_flag")], "true");
    }
    let first = &rows[0];
    assert_eq!(first[col("x")].parse::<f64>().unwrap(), 0.0);
    assert_eq!(&first[col("rank")], "1");
    assert_eq!(&first[col("reconstruction_error")], "undefined");
    assert_eq!(&first[col("cond")], "undefined");
    assert_eq!(rows[20][col("x")].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn sweep_needs_two_points() {
    let d = workspace();
    let out = qitx(d.path(), &["sweep-werner", "--points", "1", "--out", "s.csv"]);
    assert_eq!(code(&out), 2);
    let out = qitx(d.path(), &["sweep-werner", "--stop", "1.5", "--out", "s.csv"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn transmit_csv_writes_sidecar() {
    let d = workspace();
    let args = ["transmit", "--input-c", "mixed.json", "--channel", "w05.json", "--format", "csv"];
    assert_eq!(code(&qitx(d.path(), &args)), 2, "csv without --out");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", "tx.csv"]);
    assert_eq!(code(&qitx(d.path(), &with_out)), 0);
    let text = fs::read_to_string(d.path().join("tx.csv")).unwrap();
    assert_eq!(text.lines().count(), 5);
    let meta: Value = serde_json::from_str(&fs::read_to_string(d.path().join("tx.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "transmit");
}

#[test]
fn tomography_is_reproducible() {
    let d = workspace();
    let args = ["tomography", "--input-c", "mixed.json", "--channel", "w07.json", "--shots", "9000", "--seed", "7"];
    let a = qitx(d.path(), &args);
    let b = qitx(d.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    let total: u64 = v["records"].as_array().unwrap().iter().map(|r| r["shots"].as_u64().unwrap()).sum();
    assert_eq!(total, 9000);
    let other = json(&qitx(d.path(), &["tomography", "--input-c", "mixed.json", "--channel", "w07.json", "--shots", "9000", "--seed", "8"]));
    assert_ne!(v["s_hat"], other["s_hat"]);
}

#[test]
fn tomography_on_rank_deficient_channel_reports_degradation() {
    let d = workspace();
    let v = json(&qitx(
        d.path(),
        &["tomography", "--input-c", "mixed.json", "--channel", "product.json", "--shots", "3000", "--seed", "1"],
    ));
    assert_eq!(v["degraded"], true);
    assert_eq!(v["rank"]["rank"], 1);
}

#[test]
fn bad_outcome_and_shots() {
    let d = workspace();
    let base = ["tomography", "--input-c", "mixed.json", "--channel", "w07.json", "--seed", "1"];
    let mut a = base.to_vec();
    a.extend(["--shots", "300", "--outcome", "2"]);
    assert_eq!(code(&qitx(d.path(), &a)), 2);
    let mut b = base.to_vec();
    b.extend(["--shots", "2"]);
    assert_eq!(code(&qitx(d.path(), &b)), 2);
}
