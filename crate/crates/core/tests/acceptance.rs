//! The acceptance criteria, each at its stated tolerance and time limit.
//! Prints one line per criterion and fails if any criterion fails.

use std::time::{Duration, Instant};

use relmon::model::{eval_rel, is_integral_model, DEFAULT_CLOSURE_CAP};
use relmon::saturation::{refute, SatBudget};
use relmon::selftest::{
    axiom_validity, integrality_separation, join_reduction, language_separation, oracle_agreement,
    prover_soundness, saturation_invariants, saturation_refutation, validity_probe, SuiteReport,
};
use relmon::term::parse;

const SEED: u64 = 0x5eed;

struct Outcome {
    passed: bool,
    summary: String,
}

fn from_suite(r: relmon::Result<SuiteReport>) -> Outcome {
    match r {
        Ok(r) => Outcome { passed: r.passed, summary: r.summary },
        Err(e) => Outcome { passed: false, summary: format!("error: {e}") },
    }
}

/// Re-checks refutations with nothing but evaluation and the closure test.
fn refutations_recheck() -> Outcome {
    let suite = from_suite(saturation_refutation());
    if !suite.passed {
        return suite;
    }
    for (a, b) in [("x;y", "x"), ("x", "x & y"), ("x;y", "y;x")] {
        let (ta, tb) = (parse(a).unwrap(), parse(b).unwrap());
        let r = refute(&ta, &tb, 20, &SatBudget::default()).unwrap();
        let Some(report) = r.report else {
            return Outcome { passed: false, summary: format!("{a} <= {b} not refuted") };
        };
        let m = report.rel_model().unwrap();
        let (la, lb) = (eval_rel(&ta, m).unwrap(), eval_rel(&tb, m).unwrap());
        if la.is_subset(&lb) || !is_integral_model(m, DEFAULT_CLOSURE_CAP).is_integral() {
            return Outcome { passed: false, summary: format!("{a} <= {b}: model does not re-verify") };
        }
    }
    if refute(&parse("x").unwrap(), &parse("x").unwrap(), 20, &SatBudget::default()).unwrap().report.is_some() {
        return Outcome { passed: false, summary: "x <= x refuted".into() };
    }
    suite
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);
    let criteria: Vec<Criterion> = vec![
        ("axiom validity", 60, Box::new(|| from_suite(axiom_validity(SEED)))),
        ("integrality separation", 10, Box::new(|| from_suite(integrality_separation()))),
        ("language separation", 30, Box::new(|| from_suite(language_separation(SEED)))),
        ("prover soundness and coverage", 120, Box::new(|| from_suite(prover_soundness(SEED, 1000)))),
        ("term-graph oracle agreement", 60, Box::new(|| from_suite(oracle_agreement()))),
        ("saturation invariants", 120, Box::new(|| from_suite(saturation_invariants(20)))),
        ("saturation refutation", 60, Box::new(refutations_recheck)),
        ("validity probe", 60, Box::new(|| from_suite(validity_probe(SEED)))),
        ("join reduction", 60, Box::new(|| from_suite(join_reduction(SEED, 500)))),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let passed = out.passed && in_time;
        println!(
            "criterion {} {:<30} {} ({:.2}s of {limit}s) {}",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.summary
        );
        if !passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
