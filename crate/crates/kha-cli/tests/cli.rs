//! End-to-end checks of the binary: the documented examples, exit-code
//! contract, JSON round-trips, and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use kha::shuffle::KHAElement;
use kha::uplus::UElement;

fn kha_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kha"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn nf_kills_the_adjacent_degree_word() {
    let out = kha_cmd(&["nf", "--word", "e[1,0] e[1,1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out), "0\n");
}

#[test]
fn dims_table_shows_the_triple_agreement() {
    let out = kha_cmd(&["dims", "--n", "2", "--alpha", "1,1", "--m-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("m=2 3/3/3 pass"), "missing row in:\n{text}");
}

#[test]
fn sod_single_entry_k_is_the_grassmannian() {
    let out = kha_cmd(&["flagk", "sod", "--n", "2", "--N", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("6 blocks"), "missing block count in:\n{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn shuffle_mul_reads_stdin_and_round_trips_json() {
    let phi = kha_cmd(&["phi", "--word", "e[1,0]", "--n", "2", "--format", "json"]);
    assert_eq!(phi.status.code(), Some(0));
    let element_json = stdout_str(&phi);

    let dir = std::env::temp_dir().join("kha-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e10.json");
    std::fs::write(&path, &element_json).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_kha"))
        .args([
            "shuffle-mul",
            "--n",
            "2",
            "--lhs",
            "-",
            "--rhs",
            path.to_str().unwrap(),
            "--format",
            "json",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(element_json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let value: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let product = KHAElement::from_json(&value).unwrap();
    let expected = KHAElement::generator(2, 1, 0)
        .shuffle_mul(&KHAElement::generator(2, 1, 0))
        .unwrap();
    assert_eq!(product, expected);
    // Emitted JSON re-parses to an equal value.
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&value.to_string()).unwrap(),
        value
    );
}

#[test]
fn nf_json_round_trips_and_text_reparses() {
    let json_out = kha_cmd(&["nf", "--word", "e[2,0] e[1,2]", "--format", "json"]);
    assert_eq!(json_out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_str(&stdout_str(&json_out)).unwrap();
    let normal = UElement::from_json(&value).unwrap();

    let text_out = kha_cmd(&["nf", "--word", "e[2,0] e[1,2]"]);
    let reparsed: UElement = stdout_str(&text_out).trim().parse().unwrap();
    assert_eq!(normal, reparsed);
    assert!(!normal.is_zero());
}

#[test]
fn identical_argv_and_seed_give_identical_bytes() {
    let args = ["verify-iso", "--n", "1", "--window", "-1:1", "--format", "json", "--seed", "5"];
    let first = kha_cmd(&args);
    let second = kha_cmd(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 1: a verification that honestly fails (tamper control).
    let control = kha_cmd(&[
        "flagk",
        "verify",
        "--n",
        "2",
        "--N",
        "2",
        "--window",
        "-1:1",
        "--negative-control",
    ]);
    assert_eq!(control.status.code(), Some(1));
    // 2: usage error (alpha length mismatch).
    let usage = kha_cmd(&["dims", "--n", "2", "--alpha", "1,1,1", "--m-max", "2"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(!usage.stderr.is_empty());
    // 3: resource cap.
    let cap = kha_cmd(&["dims", "--n", "1", "--alpha", "5", "--m-max", "2"]);
    assert_eq!(cap.status.code(), Some(3));
}
