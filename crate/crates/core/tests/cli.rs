use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn jungck(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jungck")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn machine(args: &[&str], dir: &Path) -> (i32, Value) {
    let mut full = vec!["--format", "machine"];
    full.extend_from_slice(args);
    let out = jungck(&full, dir);
    let doc =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (code(&out), doc)
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn demo_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = jungck(&["demo", "--out", "inst"], dir.path());
    assert_eq!(code(&out), 0);
    dir
}

const CONTROLS: &str = r#""controls": {"psi": {"family": "identity", "params": []},
    "alpha": {"family": "constant", "params": [0.6]}, "beta": {"family": "constant", "params": [0.3]}}"#;

#[test]
fn demo_writes_all_files() {
    let dir = demo_dir();
    for f in ["three_point", "constant_s", "swap_violation", "continuous_halving", "harmonic_crossings"] {
        assert!(dir.path().join("inst").join(format!("{f}.json")).is_file(), "{f}");
    }
}

#[test]
fn solve_continuous_instance() {
    let dir = demo_dir();
    let (c, doc) = machine(&["solve", "inst/continuous_halving.json"], dir.path());
    assert_eq!(c, 0);
    assert_eq!(doc["converged"], true);
    assert_eq!(doc["certified"], true);
    let steps = doc["trace"]["steps"].as_array().unwrap();
    assert!(steps.len() <= 40);
    let z = doc["poc"]["z"][0].as_f64().unwrap();
    assert!(z.abs() <= 1e-10);
}

#[test]
fn solve_three_point_text_table() {
    let dir = demo_dir();
    let out = jungck(&["solve", "inst/three_point.json"], dir.path());
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("point of coincidence z = p0"), "{text}");
    assert!(text.contains("verdict: CONVERGED"));
}

#[test]
fn solve_start_override_and_non_convergence() {
    let dir = demo_dir();
    let (c, doc) = machine(&["solve", "inst/three_point.json", "--x0", "p1"], dir.path());
    assert_eq!(c, 0);
    assert_eq!(doc["trace"]["steps"][0]["x"], 1);
    let (c, doc) = machine(&["solve", "inst/swap_violation.json", "--max-iter", "5"], dir.path());
    assert_eq!(c, 1);
    assert_eq!(doc["trace"]["status"], "max-iterations");
    assert_eq!(doc["certified"], false);
    let (c, _) = machine(&["solve", "inst/three_point.json", "--x0", "nowhere"], dir.path());
    assert_eq!(c, 2);
}

#[test]
fn certify_exit_codes() {
    let dir = demo_dir();
    let (c, doc) = machine(&["certify", "inst/three_point.json"], dir.path());
    assert_eq!(c, 0);
    assert_eq!(doc["report"]["pairs_checked"], 9);
    let out = jungck(&["certify", "inst/swap_violation.json"], dir.path());
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violation at (p0, p1): lhs 1 > rhs 0.2"), "{text}");
}

#[test]
fn text_and_machine_verdicts_agree() {
    let dir = demo_dir();
    for (cmd, file) in [
        ("certify", "swap_violation"),
        ("certify", "constant_s"),
        ("oracle", "three_point"),
        ("validate", "continuous_halving"),
        ("solve", "swap_violation"),
    ] {
        let path = format!("inst/{file}.json");
        let text = jungck(&[cmd, &path], dir.path());
        let (c, _) = machine(&[cmd, &path], dir.path());
        assert_eq!(code(&text), c, "{cmd} {file}");
    }
}

#[test]
fn validate_reports_asymmetry_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "asym.json",
        r#"{"space": {"kind": "finite", "labels": ["a", "b"], "matrix": [[0, 1], [2, 0]]}}"#,
    );
    let (c, doc) = machine(&["validate", "asym.json"], dir.path());
    assert_eq!(c, 1);
    let v = doc["metric_violations"].as_array().unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["axiom"], "symmetry");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "syntax.json", "{ not json");
    write(d, "ragged.json", r#"{"space": {"kind": "finite", "labels": ["a", "b"], "matrix": [[0, 1], [1]]}}"#);
    write(d, "no_maps.json", &format!(r#"{{"space": {{"kind": "interval", "lower": 0, "upper": 1}}, {CONTROLS}}}"#));
    write(
        d,
        "bad_expr.json",
        &format!(
            r#"{{"space": {{"kind": "interval", "lower": 0, "upper": 1}}, "maps": {{"S": "x/", "T": "x"}}, {CONTROLS}}}"#
        ),
    );
    write(
        d,
        "bad_label.json",
        &format!(
            r#"{{"space": {{"kind": "finite", "labels": ["a", "b"], "matrix": [[0, 1], [1, 0]]}},
                "maps": {{"S": ["a", "z"], "T": ["a", "b"]}}, {CONTROLS}}}"#
        ),
    );
    for (cmd, file) in [
        ("validate", "syntax.json"),
        ("validate", "ragged.json"),
        ("certify", "no_maps.json"),
        ("solve", "bad_expr.json"),
        ("oracle", "bad_label.json"),
        ("certify", "missing.json"),
    ] {
        let (c, doc) = machine(&[cmd, file], d);
        assert_eq!(c, 2, "{cmd} {file}");
        assert_eq!(doc["error"], "input");
    }
}

#[test]
fn non_monotone_t_without_inverse_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "logistic.json",
        &format!(
            r#"{{"space": {{"kind": "interval", "lower": 0, "upper": 1}},
                "maps": {{"S": "0.5 + 0*x", "T": "4*x*(1-x)"}}, {CONTROLS}}}"#
        ),
    );
    let (c, doc) = machine(&["solve", "logistic.json"], dir.path());
    assert_eq!(c, 3);
    assert_eq!(doc["error"], "capability");
}

#[test]
fn oracle_on_continuous_space_exits_3() {
    let dir = demo_dir();
    let (c, _) = machine(&["oracle", "inst/continuous_halving.json"], dir.path());
    assert_eq!(c, 3);
}

#[test]
fn oracle_report_on_constant_s() {
    let dir = demo_dir();
    let (c, doc) = machine(&["oracle", "inst/constant_s.json"], dir.path());
    assert_eq!(c, 0);
    assert_eq!(doc["report"]["ea"], true);
    assert_eq!(doc["report"]["owc"], true);
    assert_eq!(doc["report"]["common_fixed_points"], serde_json::json!([0]));
    assert_eq!(doc["labels"][0], "a");
    assert_eq!(doc["falsified"], false);
}

#[test]
fn fuzz_summary_and_no_reproductions_without_falsification() {
    let dir = tempfile::tempdir().unwrap();
    let (c, doc) =
        machine(&["fuzz", "--seeds", "0..50", "--n", "2..5", "--strategy", "constant-S", "--out", "repro"], dir.path());
    assert_eq!(c, 0);
    let summary = &doc["summary"];
    assert_eq!(summary["instances"], 50);
    assert_eq!(summary["certified"], 50);
    assert_eq!(summary["falsifications"], serde_json::json!([]));
    assert!(!dir.path().join("repro").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&jungck(&["fuzz", "--strategy", "greedy"], dir.path())), 2);
    assert_eq!(code(&jungck(&["fuzz", "--n", "1"], dir.path())), 2);
    assert_eq!(code(&jungck(&[], dir.path())), 2);
    assert_eq!(code(&jungck(&["--help"], dir.path())), 0);
}
