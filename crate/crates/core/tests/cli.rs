//! The installed binary: exit codes, printed verdicts and emitted scripts.

mod common;

use std::process::{Command, Output};

use common::{fixture, solver};

fn cltlb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cltlb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    fixture(&format!("fixtures/{name}")).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_fig1_is_sat_with_witness() {
    if solver().is_none() {
        return;
    }
    let o = cltlb(&["check", "--formula", &path("fig1.clt"), "--bound", "3", "--witness"]);
    assert_eq!(o.status.code(), Some(10), "{o:?}");
    let out = stdout(&o);
    assert!(out.contains("sat at k = 3"), "{out}");
    assert!(out.contains("bound: 3") && out.contains("values:"), "{out}");
}

#[test]
fn check_contradiction_is_unsat() {
    if solver().is_none() {
        return;
    }
    let o = cltlb(&["check", "--formula", &path("contradiction.clt"), "--bound", "2"]);
    assert_eq!(o.status.code(), Some(20), "{o:?}");
    assert!(stdout(&o).contains("unsat for k in 2..2"));
}

#[test]
fn counter_never_goes_negative() {
    if solver().is_none() {
        return;
    }
    let o = cltlb(&["reach", "--kripke", &path("counter.kr"), "--target", "x < 0", "--bounds", "1..10"]);
    assert_eq!(o.status.code(), Some(20), "{o:?}");
    assert!(stdout(&o).contains("unreachable up to k = 10"));
}

#[test]
fn counter_reaches_positive_values() {
    if solver().is_none() {
        return;
    }
    let o = cltlb(&["reach", "--kripke", &path("counter.kr"), "--target", "x > 2", "--bounds", "1..5", "--witness"]);
    assert_eq!(o.status.code(), Some(10), "{o:?}");
    assert!(stdout(&o).contains("reachable at k = "));
}

#[test]
fn emit_smt_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.smt2");
    let b = dir.path().join("b.smt2");
    for out in [&a, &b] {
        let o = cltlb(&["emit-smt", "--formula", &path("fig1.clt"), "--bound", "3", "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{o:?}");
    }
    let a = std::fs::read(a).unwrap();
    assert!(a.starts_with(b"(set-logic QF_UFIDL)\n"));
    assert_eq!(a, std::fs::read(b).unwrap());
    let to_stdout = cltlb(&["emit-smt", "--formula", &path("fig1.clt"), "--bound", "3"]);
    assert_eq!(to_stdout.stdout, a);
}

#[test]
fn check_can_also_emit_the_script() {
    if solver().is_none() {
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fig1.smt2");
    let o = cltlb(&[
        "check",
        "--formula",
        &path("fig1.clt"),
        "--bound",
        "3",
        "--emit-smt",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(10), "{o:?}");
    let golden = std::fs::read(fixture("golden/fig1_k3.smt2")).unwrap();
    assert_eq!(std::fs::read(file).unwrap(), golden);
}

#[test]
fn lia_atom_under_dl_names_the_atom() {
    let o = cltlb(&["emit-smt", "--formula", &path("lia_atom.clt"), "--bound", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("2*x") || err.contains("2 * x"), "{err}");
    let o = cltlb(&["emit-smt", "--formula", &path("lia_atom.clt"), "--bound", "1", "--theory", "lia"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("(set-logic QF_UFLIA)\n"));
}

#[test]
fn oracle_agrees_on_fixtures() {
    if solver().is_none() {
        return;
    }
    let o = cltlb(&["oracle", "--formula", &path("fig1.clt"), "--bound", "3", "--compare"]);
    assert_eq!(o.status.code(), Some(10), "{o:?}");
    let out = stdout(&o);
    assert!(out.contains("k = 3: oracle sat") && out.contains("k = 3: agree"), "{out}");

    let o = cltlb(&["oracle", "--formula", &path("contradiction.clt"), "--bound", "2", "--compare"]);
    assert_eq!(o.status.code(), Some(20), "{o:?}");
    assert!(stdout(&o).contains("agree"));

    let o = cltlb(&["check", "--formula", &path("fig1.clt"), "--bounds", "1..3", "--compare"]);
    assert_eq!(o.status.code(), Some(10), "{o:?}");
}

#[test]
fn oracle_refuses_beyond_caps() {
    let o = cltlb(&["oracle", "--formula", &path("caps.clt"), "--bound", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceed"));
}

#[test]
fn missing_solver_is_an_error() {
    let o = cltlb(&["check", "--formula", &path("fig1.clt"), "--bound", "1", "--solver", "/no/such/solver"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cltlb(&[]).status.code(), Some(1));
    assert_eq!(cltlb(&["check", "--formula", &path("fig1.clt")]).status.code(), Some(1));
    assert_eq!(cltlb(&["check", "--formula", &path("fig1.clt"), "--bounds", "3..1"]).status.code(), Some(1));
    assert_eq!(cltlb(&["--help"]).status.code(), Some(0));
    assert_eq!(cltlb(&["--version"]).status.code(), Some(0));
}
