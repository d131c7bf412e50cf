//! End-to-end checks of the compiled binary: output formats and exit codes.

use std::process::{Command, Output};

fn zetaforest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaforest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).trim_end().to_string()
}

#[test]
fn reduce_forest_and_cone() {
    let out = zetaforest(&["reduce", "--forest", "2(1,1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2*zeta(2,1,1)");

    let out = zetaforest(&["reduce", "--cone", &fixture("c2.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "2*zeta(4,1,1,2,1) + 6*zeta(4,1,2,1,1) + 12*zeta(4,2,1,1,1)"
    );
}

#[test]
fn check_reports_and_exit_codes() {
    let out = zetaforest(&["check", "--cone", &fixture("c1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("tree-like: yes"), "{text}");
    assert!(text.contains("forest: 2(1,1)"), "{text}");

    let out = zetaforest(&["check", "--cone", &fixture("skew.json")]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("NOT_POSET_COMPATIBLE"), "{text}");

    let out = zetaforest(&["check", "--cone", &fixture("skew.json"), "--align"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("tree-like: yes"));
}

#[test]
fn eval_passes_on_the_first_fixture() {
    let out = zetaforest(&[
        "eval",
        "--cone",
        &fixture("c1.json"),
        "--N",
        "2000",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("cross-check: pass"));
}

#[test]
fn mt_verb_and_parse_errors() {
    let out = zetaforest(&["mt", "--args", "1,1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2*zeta(2,1)");

    let out = zetaforest(&["reduce", "--forest", "2(1,,1)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("parse error at byte 4"),
        "{}",
        stderr(&out)
    );

    let out = zetaforest(&["reduce", "--forest", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("DIVERGENT_ROOT"), "{}", stderr(&out));

    let out = zetaforest(&["no-such-verb"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_round_trips_through_the_library() {
    let out = zetaforest(&["reduce", "--cone", &fixture("c3.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = zetaforest::reduction::MzvCombination::from_json_str(&stdout(&out)).unwrap();
    assert_eq!(parsed.len(), 9);
    let stats = parsed.stats().unwrap();
    assert_eq!((stats.weight, stats.depth), (14, 7));
}
