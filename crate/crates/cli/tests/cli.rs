use std::fs;
use std::process::{Command, Output};

fn minbcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minbcov"))
        .args(args)
        .env_remove("MINBCOV_OUT_DIR")
        .output()
        .expect("binary runs")
}

#[test]
fn rejects_k_below_two() {
    let out = minbcov(&["verify", "--d", "3", "--variant", "potential", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 <= k"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(minbcov(&["verify", "--variant", "potential"]).status.code(), Some(2));
    assert_eq!(minbcov(&["verify", "--k", "2"]).status.code(), Some(2));
    assert_eq!(minbcov(&["verify", "--check", "bogus"]).status.code(), Some(2));
    assert_eq!(minbcov(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(minbcov(&["verify", "--d", "1"]).status.code(), Some(2));
}

#[test]
fn default_campaign_passes_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "--d", "3", "--variant", "mbcov", "--deg", "4", "--trials", "200", "--seed", "42", "--format", "json"];
    let run = |dir: &std::path::Path| {
        let mut v: Vec<&str> = args.to_vec();
        let d = dir.to_str().unwrap();
        v.extend(["--out", d]);
        let out = minbcov(&v);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        out.stdout
    };
    let sa = run(a.path());
    let sb = run(b.path());
    assert_eq!(sa, sb);
    for f in ["report.jsonl", "summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let summary = fs::read_to_string(a.path().join("summary.json")).unwrap();
    assert!(summary.contains("\"all_required_passed\": true"));
    assert!(a.path().join("timings.jsonl").exists());
    let report = fs::read_to_string(a.path().join("report.jsonl")).unwrap();
    assert!(!report.contains("millis"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_minbcov"))
        .args(["verify", "--check", "algebra", "--trials", "20"])
        .env("MINBCOV_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("report.jsonl").exists());
}

#[test]
fn higher_bracket_suite_at_five_two() {
    let out = minbcov(&["verify", "--d", "5", "--variant", "potential", "--k", "2", "--check", "jacobi", "--trials", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("l4 lands in the central slot"), "{text}");
    assert!(text.contains("presymplectic"));
}

#[test]
fn export_contains_central_row_and_is_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let out = minbcov(&["export", "--check", "cocycle", "--check", "sl2", "--out", dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let rows = fs::read_to_string(a.path().join("extension_fields.jsonl")).unwrap();
    let row = rows.lines().find(|l| l.contains("\"lhs\":\"dx1\",\"rhs\":\"xi3dx2 - xi2dx3\"")).unwrap();
    assert!(row.contains("\"e1\":\"1\",\"e2\":\"0\""), "{row}");
    for f in ["sho_structure.jsonl", "extension_fields.jsonl", "extension_cocycles.jsonl", "sl2_action.jsonl", "sl2_bullets.jsonl"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn export_with_no_suites_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = minbcov(&["export", "--check", "none", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn default_summary_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = minbcov(&["verify", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let got = fs::read_to_string(dir.path().join("summary.json")).unwrap();
    assert_eq!(got, include_str!("golden/default_summary.json"));
}
