use std::io::Write;
use std::process::{Command, Output, Stdio};

fn eulersum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulersum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reduce_weight_six() {
    let o = eulersum(&["reduce", "S(1,2;3)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "-101/48*z6 + 5/2*z3^2\n");
    let o = eulersum(&["reduce", "S(2,2;3)"]);
    assert_eq!(stdout(&o), "-155/8*z7 + 5*z2*z5 + 19/2*z3*z4\n");
}

#[test]
fn reduce_reports_leftover_sums() {
    let o = eulersum(&["reduce", "S(1,4;5) - S(1,2;3)"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("S(1,4;5)"));
    assert!(out.ends_with("unresolved: S(1,4;5)\n"), "{out}");
}

#[test]
fn verify_passes_and_fails() {
    let o = eulersum(&["verify", "S(1;2) == 2*z3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS verify/001"));
    let o = eulersum(&["verify", "S(1;2) == 2*z3", "S(1;2) == z3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL verify/002"));
}

#[test]
fn verify_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eulersum"))
        .args(["verify", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"S(1;2) == 2*z3\n\n# comment\nS(2;3) + S(3;2) == z5 + z2*z3\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().all(|l| l.contains("\"verdict\":\"pass\"")));
}

#[test]
fn eval_table_value() {
    let o = eulersum(&["eval", "S(2,2;3)", "--digits", "30"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("1.3512557852628138868807047910"), "{out}");
    let digits: u32 = out.lines().nth(1).unwrap().split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(digits >= 25);
}

#[test]
fn input_errors_exit_nonzero() {
    let o = eulersum(&["eval", "S(2;1)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("divergent"));
    let o = eulersum(&["reduce", "z3 + * z2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 5"));
    let o = eulersum(&["grid", "--families", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = eulersum(&["table1", "--digits", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_grid_and_listing() {
    let o = eulersum(&["grid", "--families", "euler_linear,harmonic_pair_odd", "--p-max", "3", "--m-max", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("8 checks: 8 passed, 0 failed\n"));
    let o = eulersum(&["list-identities"]);
    assert_eq!(stdout(&o).lines().count(), 17);
    let o = eulersum(&["list-identities", "--family", "reflection", "--p", "2", "--m", "1"]);
    assert_eq!(stdout(&o), "reflection(p=2,q=3): S(2;3) + S(3;2) == z5 + z2*z3\n");
}
