use std::io::Write;
use std::process::{Command, Output, Stdio};

fn sxl(args: &[&str]) -> Output {
    sxl_with(args, &[], None)
}

fn sxl_with(args: &[&str], env: &[(&str, &str)], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sxl"));
    cmd.args(args)
        .env_remove("SXL_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lambda_of_family() {
    let o = sxl(&["lambda", "ext{k=2,m=9}"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("lambda: 3.372281323\n"));
}

#[test]
fn construct_pipes_into_lambda() {
    let g6 = stdout(&sxl(&["construct", "fixture:G2"]));
    let piped = sxl_with(&["lambda", "-"], &[], Some(&g6));
    let direct = sxl(&["lambda", "fixture:G2"]);
    assert_eq!(piped.status.code(), Some(0));
    assert_eq!(
        stdout(&piped).lines().next(),
        stdout(&direct).lines().next()
    );
}

#[test]
fn free_with_witness() {
    let o = sxl(&["free", "--forbid", "K3", "C5"]);
    assert_eq!(stdout(&o), "free: true\n");
    let o = sxl(&["free", "--forbid", "K3", "K4", "--witness"]);
    let out = stdout(&o);
    assert!(out.starts_with("free: false\nwitness: "));
}

#[test]
fn json_output_parses() {
    let o = sxl(&["--format", "json", "lambda", "K4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lambda"], 3.0);
}

#[test]
fn enumerate_small() {
    let o = sxl(&["enumerate", "--m", "3"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = sxl(&["enumerate", "--m", "4", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn scan_is_thread_count_independent() {
    let args = [
        "--format",
        "json",
        "scan",
        "--forbid",
        "V5",
        "--bound",
        "zls",
        "--m",
        "8..11",
        "--predict",
        "k=2",
    ];
    let one = sxl_with(&args, &[("SXL_THREADS", "1")], None);
    let two = sxl_with(&args, &[("SXL_THREADS", "2")], None);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
}

#[test]
fn csv_scan_has_header() {
    let o = sxl(&[
        "--format", "csv", "scan", "--forbid", "K3", "--bound", "nosal", "--m", "1..4",
    ]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("forbid,bound_kind,m,"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn violation_exits_two_with_counterexample() {
    let o = sxl(&["check", "--lemma", "rst"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("D~_"));
    let o = sxl(&["check", "--lemma", "rst", "--m-min", "8"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sxl(&["lambda", "nonsense"]).status.code(), Some(1));
    assert_eq!(sxl(&["bogus-command"]).status.code(), Some(1));
    assert_eq!(sxl(&["construct", "K200"]).status.code(), Some(1));
    let o = sxl_with(&["lambda", "K3"], &[("SXL_THREADS", "0")], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(sxl(&["--help"]).status.code(), Some(0));
}
