use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use vecdual_cli::{check, run, CliError, RunOptions, EXIT_INPUT, EXIT_OK};

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vecdual"))
}

#[test]
fn shipped_scenarios_validate() {
    let mut n = 0;
    for e in fs::read_dir(scenarios()).unwrap() {
        let path = e.unwrap().path();
        if path.extension().is_some_and(|x| x == "json") {
            check(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 8);
}

#[test]
fn primal_table_writes_report_and_front() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { out: dir.path().to_path_buf(), seed: Some(5), probe_res: Some(11) };
    let o = run(&scenarios().join("primal_table.json"), &opts).unwrap();
    assert_eq!(o.exit_code, EXIT_OK);
    assert_eq!(o.report.status, "pass");
    assert_eq!(o.report.seed, 5);
    let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.ends_with("}\n"));
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["audit"]["semantics"], "sampled relaxation");
    let csv = fs::read_to_string(dir.path().join("front.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("y1,y2,label"));
    assert_eq!(csv.lines().count(), 1 + 11 * 11);
}

#[test]
fn malformed_json_reports_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"name\": \"x\",\n  \"task\": primal\n}\n").unwrap();
    match check(&path) {
        Err(CliError::Json { line, column, .. }) => assert_eq!((line, column), (3, 11)),
        other => panic!("unexpected {other:?}"),
    }
    let out = bin().args(["run", "--scenario"]).arg(&path).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json:3:11"));
}

#[test]
fn unknown_fields_and_missing_instances_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let extra = dir.path().join("extra.json");
    fs::write(&extra, r#"{"name": "x", "task": "primal", "colour": 1}"#).unwrap();
    assert!(matches!(check(&extra), Err(CliError::Json { .. })));
    let bare = dir.path().join("bare.json");
    fs::write(&bare, r#"{"name": "x", "task": "primal"}"#).unwrap();
    let e = check(&bare).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_INPUT);
    let out = bin().args(["check", "--scenario"]).arg(&bare).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn quiet_run_is_silent() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--quiet", "--scenario"])
        .arg(scenarios().join("primal_table.json"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stderr.is_empty());
}
