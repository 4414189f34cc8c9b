//! Every example under `examples/` runs to completion.

#[allow(dead_code)]
#[path = "../examples/terms.rs"]
mod terms;
#[allow(dead_code)]
#[path = "../examples/prove.rs"]
mod prove;
#[allow(dead_code)]
#[path = "../examples/counterexamples.rs"]
mod counterexamples;
#[allow(dead_code)]
#[path = "../examples/term_graphs.rs"]
mod term_graphs;
#[allow(dead_code)]
#[path = "../examples/join_reduction.rs"]
mod join_reduction;
#[allow(dead_code)]
#[path = "../examples/saturation.rs"]
mod saturation;
#[allow(dead_code)]
#[path = "../examples/validity_probe.rs"]
mod validity_probe;
#[allow(dead_code)]
#[path = "../examples/selftest.rs"]
mod selftest;

#[test]
fn terms_example() {
    let lines = terms::run_example().unwrap();
    assert!(lines[0].ends_with("=> x & y  (1 ops)"));
}

#[test]
fn prove_example() {
    let lines = prove::run_example().unwrap();
    assert!(lines.iter().any(|l| l.contains("[base]  Unknown")));
}

#[test]
fn counterexamples_example() {
    let lines = counterexamples::run_example().unwrap();
    assert_eq!(lines[2], "  Integral: no counterexample");
}

#[test]
fn term_graphs_example() {
    let lines = term_graphs::run_example().unwrap();
    assert!(lines[1].starts_with("x;y <= x: invalid"));
}

#[test]
fn join_reduction_example() {
    let lines = join_reduction::run_example().unwrap();
    assert!(lines[0].contains("Valid") && lines[1].contains("Invalid"));
}

#[test]
fn saturation_example() {
    let lines = saturation::run_example().unwrap();
    assert!(lines.iter().any(|l| l.starts_with("x;y <= y;x: refuted")));
    assert!(lines.last().unwrap().ends_with("no refutation"));
}

#[test]
fn validity_probe_example() {
    let lines = validity_probe::run_example().unwrap();
    assert!(lines[0].starts_with("relation models: no counterexample"));
}

#[test]
fn selftest_example() {
    assert!(selftest::run_example().unwrap().iter().all(|l| l.contains(": pass ")));
}
