use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn permlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permlab"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn logstar_of_sixteen() {
    let o = permlab(&["logstar", "--p", "2", "--n", "16"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn reduce_support_fixtures() {
    for (file, b) in [("matching_p2.json", "0:1,1:1"), ("matching_p3.json", "0:1,1:2")] {
        let o = permlab(&["reduce-support", "--fixture", &fixture(file)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with(&format!("b = {b}\n")), "{}", stdout(&o));
    }
}

#[test]
fn reduce_support_json_trace() {
    let o = permlab(&["reduce-support", "--fixture", &fixture("matching_p2.json"), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["b_final"], serde_json::json!(["0:1,1:1"]));
    let step = &v["trace"][0];
    assert_eq!(step["h"], "1,1");
    assert_eq!(step["m"], 1);
    assert_eq!(step["n"], 1);
    assert_eq!(step["shortcut"], false);
}

#[test]
fn fixture_prime_conflicts_with_flag() {
    let o = permlab(&["reduce-support", "--fixture", &fixture("matching_p2.json"), "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prime mismatch"));
}

#[test]
fn refute_pcf_fixture_report() {
    let o = permlab(&["refute-pcf", "--fixture", &fixture("tower_n4_s02.json"), "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["S"], serde_json::json!([0, 2]));
    assert_eq!(v["i"], 1);
    assert_eq!(v["g"], "0,1,0,0");
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    assert!(levels.iter().all(|l| l["moved"] == true));
}

#[test]
fn refute_pcf_rejects_full_set() {
    let o = permlab(&["refute-pcf", "--n", "2", "--s", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extract_and_certify() {
    let o = permlab(&["extract-thin", "--count", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("indices [0, 3, 5, 17]"));
    let o = permlab(&["certify", "--file", &fixture("certificate_prefix_sums_p2.json")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "valid: true");
}

#[test]
fn certify_rejects_broken_certificate() {
    let dir = std::env::temp_dir().join(format!("permlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind":"extracted-stream","p":2,"window":64,"checkpoints":[[0,1],[3,3]],"tail_checkpoints":[[0,1],[3,3]]}"#,
    )
    .unwrap();
    let o = permlab(&["certify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("valid: false"));
}

#[test]
fn act_and_support_check() {
    let o = permlab(&["act", "--x", "(0|0:1,1:1)", "--g", "1,0,0"]);
    assert_eq!(stdout(&o).trim(), "(1|0:1,1:1)");
    let o = permlab(&["support-check", "--a", "0:1", "--x", "(1|0:1)"]);
    assert!(o.status.success());
    let o = permlab(&["support-check", "--a", "1:1", "--x", "(1|0:1)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn horizon_violation_is_reported() {
    let o = permlab(&["act", "--x", "(0|5:1)", "--g", "1,0,0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("horizon"));
}

#[test]
fn density_csv_file() {
    let dir = std::env::temp_dir().join(format!("permlab-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.csv");
    let o = permlab(&["density", "--a", "0:1;1:1;2:1", "--k-max", "3", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, "k,d_k,logstar_dk,logstar_k\n0,1,0,\n1,2,1,0\n2,3,2,1\n3,3,2,2\n");
}

#[test]
fn bad_flags_are_usage_errors() {
    let o = permlab(&["logstar", "--p", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = permlab(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}
