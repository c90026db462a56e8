use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sphtile(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphtile"))
        .current_dir(dir)
        .env_remove("SPHTILE_NODE_CAP")
        .args(args)
        .output()
        .expect("run sphtile")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr)
        .unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {:?}", o.stderr))
}

#[test]
fn angles_prints_header_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["angles", "--case", "beta3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# sphtile angles | tolerances eq5=1e-9 vertex=1e-6"));
    assert!(text.contains("alpha = 0.535845π"));
    assert!(text.contains("gamma = 0.398744π"));
}

#[test]
fn tolerance_override_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(
        dir.path(),
        &["--tol-eq5", "1e-7", "angles", "--case", "fusion"],
    );
    assert!(out.status.success());
    assert!(stdout(&out).lines().next().unwrap().contains("eq5=1e-7"));

    let out = sphtile(
        dir.path(),
        &["--tol-eq5", "-1", "angles", "--case", "fusion"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["build", "fusion:2", "--out", "f.json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("f.json").exists());
    let out = sphtile(dir.path(), &["verify", "f.json", "--angles", "fusion"]);
    assert!(out.status.success(), "{}", stdout(&out));

    // right combinatorics, wrong angles
    let out = sphtile(dir.path(), &["verify", "f.json", "--angles", "sporadic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_file_names_failing_check() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sphtile(dir.path(), &["build", "cube", "--out", "c.json"])
        .status
        .success());
    let path = dir.path().join("c.json");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["faces"][0]["corners"][0] = Value::from("b");
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = sphtile(dir.path(), &["verify", "c.json", "--angles", "cube"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"), "{}", stdout(&out));
}

#[test]
fn classify_small_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(
        dir.path(),
        &["classify", "--max-f", "6", "--report", "r.json"],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tilings: 1"));
    assert!(text.contains("cube"));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["report"]["tilings"].as_array().unwrap().len(), 1);
}

#[test]
fn classify_output_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        let out = sphtile(
            dir.path(),
            &[
                "classify", "--max-f", "14", "--jobs", jobs, "--report", "r.json",
            ],
        );
        assert!(out.status.success());
        stdout(&out)
    };
    let one = run("1");
    assert_eq!(one, run("8"));
    assert!(one.contains("tilings: 4"));
}

#[test]
fn node_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(
        dir.path(),
        &["classify", "--max-f", "22", "--node-cap", "5"],
    );
    assert_eq!(out.status.code(), Some(4));
    let err = error_json(&out);
    assert_eq!(err["error"], "budget_exceeded");
    assert_eq!(err["cap"], 5);

    let out = Command::new(env!("CARGO_BIN_EXE_sphtile"))
        .current_dir(dir.path())
        .env("SPHTILE_NODE_CAP", "5")
        .args(["classify", "--max-f", "22"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn domain_error_is_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["angles", "--case", "earth-map:1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = error_json(&out);
    assert_eq!(err["error"], "domain");
    assert_eq!(err["exit_code"], 3);
    assert!(err["message"].as_str().unwrap().contains("c >= 2"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["verify", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_json(&out)["error"], "usage");
    assert!(sphtile(dir.path(), &["--help"]).status.success());
}

#[test]
fn render_svg_and_off() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        sphtile(dir.path(), &["build", "earth-map:3", "--out", "e.json"])
            .status
            .success()
    );
    let out = sphtile(
        dir.path(),
        &[
            "render",
            "e.json",
            "--angles",
            "earth-map:3",
            "--svg",
            "e.svg",
            "--off",
            "e.off",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = std::fs::read_to_string(dir.path().join("e.svg")).unwrap();
    assert_eq!(svg.matches("<path ").count(), 22);
    let off = std::fs::read_to_string(dir.path().join("e.off")).unwrap();
    assert!(off.starts_with("OFF\n"));
}

#[test]
fn plot_c_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["plot-c", "--steps", "50", "--csv", "c.csv"]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    assert_eq!(csv.lines().next(), Some("gamma_over_pi,c_value"));
}

#[test]
fn avc_lists_entries() {
    let dir = tempfile::tempdir().unwrap();
    let out = sphtile(dir.path(), &["avc", "--case", "sporadic"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("a^2 b^1"));
    assert!(text.contains("a^3 c^1"));
}
