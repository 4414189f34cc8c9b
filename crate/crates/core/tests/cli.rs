//! The binary's exit codes and output determinism.

use std::process::{Command, Output};

fn relmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relmon")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    relmon(args).status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["prove", "(1&x);(1&y) = 1 & x & y", "--axioms", "base"]), 0);
    assert_eq!(code(&["prove", "1 & x;y = 1 & y;x", "--axioms", "base", "--nodes", "20000"]), 2);
    assert_eq!(code(&["prove", "x &"]), 1);
    assert_eq!(code(&["prove", "x = x", "--axioms", "nope"]), 1);
    assert_eq!(code(&["refute", "x;y & 1 = (x&1);(y&1)", "--mode", "rel-integral"]), 0);
    assert_eq!(code(&["refute", "x;y & 1 = (x&1);(y&1)", "--mode", "lang"]), 2);
    assert_eq!(code(&["decide", "x;y <= x"]), 0);
    assert_eq!(code(&["decide", "x + 0 <= x", "--fragment", "meet-comp-one"]), 0);
    assert_eq!(code(&["saturate", "--theta", "0"]), 1);
    assert_eq!(code(&["saturate", "--theta", "x;y", "--steps", "3", "--check-invariants"]), 0);
    assert_eq!(code(&["graph", "x + y"]), 1);
    assert_eq!(code(&["selftest", "--suite", "refutation"]), 0);
    assert_eq!(code(&["selftest", "--suite", "nope"]), 1);
}

#[test]
fn json_shape_and_determinism() {
    let args = ["--json", "--seed", "7", "refute", "x;y = y;x", "--mode", "rel-integral"];
    let a = relmon(&args).stdout;
    assert_eq!(a, relmon(&args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["command"], "refute");
    assert_eq!(v["verdict"], "refuted");
    let args = ["--json", "saturate", "--theta", "x;y", "--refute", "x", "--steps", "5"];
    let a = relmon(&args).stdout;
    assert_eq!(a, relmon(&args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["payload"]["model"]["base"], 3);
}

#[test]
fn dot_output() {
    let out = String::from_utf8(relmon(&["saturate", "--theta", "x;y", "--steps", "2", "--dot"]).stdout).unwrap();
    assert!(out.starts_with("digraph saturation"));
    assert!(out.contains("style=bold") && out.contains("style=dashed"));
    let out = String::from_utf8(relmon(&["graph", "x;y", "--dot"]).stdout).unwrap();
    assert!(out.starts_with("digraph term"));
}

#[test]
fn timeout_gives_unknown() {
    assert_eq!(code(&["--timeout", "0.001", "selftest"]), 2);
}
