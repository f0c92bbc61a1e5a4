//! End-to-end runs of the `evupdate` binary.

use std::path::Path;
use std::process::{Command, Output};

use evupdate_cli::model::medical_model_json;

fn evupdate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evupdate")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_model(dir: &Path) -> String {
    let path = dir.join("medical.json");
    std::fs::write(&path, medical_model_json()).unwrap();
    path.display().to_string()
}

#[test]
fn report_medical() {
    let o = evupdate(&["report", "medical"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("jeffrey_prior_validity = 19941/64000"));
    assert!(text.contains("pearl_posterior = 27/635|d> + 608/635|~d>"));
    assert!(text.contains("iterated_pearl = 381/4000"));
    assert_eq!(text, stdout(&evupdate(&["report", "medical"])));
}

#[test]
fn grid_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = evupdate(&["grid", "--mode", "jeffrey-update", "--imax", "2", "--jmax", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "i,j,value");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[4], "2,1,0.0734867860188");
    assert!(!csv.contains('\r'));
}

#[test]
fn grid_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("g{k}.csv"));
        let o = evupdate(&["grid", "--mode", "vfe-dkl-delta", "--imax", "10", "--jmax", "10", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn grid_rejects_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = evupdate(&["grid", "--mode", "pearl-validity", "--imax", "0", "--jmax", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = evupdate(&["grid", "--mode", "nonsense", "--imax", "1", "--jmax", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_runs_and_is_deterministic() {
    let a = evupdate(&["check", "--suite", "jeffrey-order", "--trials", "100", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.contains("jeffrey.order_medical_counterexample"));
    assert!(text.contains("0.0592|d>") && text.contains("0.0610|d>"));
    assert!(text.contains("witness: trial"));
    let b = evupdate(&["check", "--suite", "jeffrey-order", "--trials", "100", "--seed", "7"]);
    assert_eq!(text, stdout(&b));
}

#[test]
fn check_unknown_suite() {
    let o = evupdate(&["check", "--suite", "unknown", "--trials", "1", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn eval_expressions() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path());
    let o = evupdate(&["eval", "--model", &model, "--expr", "validity(prior, pt)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "17/40\n");
    let o = evupdate(&["eval", "--model", &model, "--expr", "flrn(urn)"]);
    assert_eq!(stdout(&o), "1/2|R> + 1/5|B> + 3/10|G>\n");
}

#[test]
fn eval_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"spaces\": {\n    \"D\": [\"d\" \"~d\"]\n  }\n}\n").unwrap();
    let o = evupdate(&["eval", "--model", bad.to_str().unwrap(), "--expr", "validity(prior, pt)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let model = write_model(dir.path());
    for expr in ["validity(prior, nosuch)", "validity(prior", "frobnicate(prior)"] {
        let o = evupdate(&["eval", "--model", &model, "--expr", expr]);
        assert_eq!(o.status.code(), Some(2), "{expr}");
    }
    let o = evupdate(&["eval", "--model", "/nonexistent/model.json", "--expr", "flrn(urn)"]);
    assert_eq!(o.status.code(), Some(2));
}
