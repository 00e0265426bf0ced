use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use geoharmonic_cli::record::ResultRecord;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoharmonic")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn example_sweep_gives_fifty_passing_records() {
    let out = bin(&["run", &config("anandan-aharonov.json")]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| &r[10] == "true"));
}

#[test]
fn table1_has_the_four_models() {
    let out = bin(&["run", &config("table1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    let names: Vec<&str> = rows.iter().map(|r| &r[3]).collect();
    assert_eq!(names, ["quantum", "quantum-information", "gravitational", "thermal"]);
}

#[test]
fn same_config_and_seed_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let out = bin(&["run", &config("phases.json"), "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.csv");
    bin(&["run", &config("phases.json"), "--seed", "8", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn json_output_round_trips() {
    let out = bin(&["run", &config("grover.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let records: Vec<ResultRecord> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records.len(), 5);
    assert!(records.iter().all(|r| r.experiment == "grover" && r.pass));
}

#[test]
fn output_is_lf_only() {
    let out = bin(&["run", &config("grover.json")]);
    assert!(!out.stdout.contains(&b'\r'));
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn zero_trials_writes_a_header_only_csv() {
    let out = bin(&["run", &config("jacobi.json"), "--set", "trials=0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::str::from_utf8(&out.stdout).unwrap(),
        "experiment,param_key,param_value,quantity,check,measured,reference,tolerance,abs_err,rel_err,pass,wall_ms\n"
    );
}

#[test]
fn tolerance_failure_exits_with_one() {
    // Three time units hold too few oscillations to fit a frequency.
    let out = bin(&["run", &config("gravity.json"), "--set", "integrator.end=3"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert!(rows.iter().any(|r| &r[10] == "false"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "typo.json", "{\n  \"experiment\": \"grover\",\n  \"sede\": 3\n}\n");
    let out = bin(&["run", typo.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sede") && err.contains("line 3"), "{err}");

    let unknown_param = write(dir.path(), "p.json", r#"{"experiment": "grover", "parameters": {"M": 4}}"#);
    assert_eq!(bin(&["run", unknown_param.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["run", &config("grover.json"), "--set", "N=2.5"]).status.code(), Some(2));
    assert_eq!(bin(&["run", &config("grover.json"), "--set", "N=1"]).status.code(), Some(2));
    assert_eq!(bin(&["run", &config("grover.json"), "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_three() {
    assert_eq!(bin(&["run", "/nonexistent/config.json"]).status.code(), Some(3));
    let out = bin(&["run", &config("grover.json"), "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn list_names_every_experiment() {
    let out = bin(&["list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["grover", "fisher", "anandan-aharonov", "gravity", "thermal", "jacobi", "phases", "table1"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
