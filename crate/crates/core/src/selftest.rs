//! Self-check suites: axiom validity in the intended models, the
//! separations between the model classes, prover soundness, agreement of
//! the term-graph oracle with evaluation, join reduction, and saturation.
//!
//! Each suite returns a [`SuiteReport`]; a failed suite carries the first
//! offending item in its summary.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::{axiom_list, AxiomSet};
use crate::error::{Error, Result};
use crate::model::{
    is_integral_model, search_lang_counterexample, search_rel_counterexample, CounterexampleReport, LangSearchBounds,
    RelMode, RelSearchBounds, DEFAULT_CLOSURE_CAP,
};
use crate::prover::{prove, random_rewrites, Budget, ProofOutcome, ProofStatus};
use crate::saturation::{check_invariants, refute, SatBudget, SatGraph};
use crate::term::{enumerate_terms, parse, parse_equation, random_term, Equation, Signature, Term};
use crate::termgraph::{
    build_term_graph, canonical_countermodel, decide_leq_meet_comp_one, decide_with_join_reduction,
    term_graph_oracle, Verdict,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
    #[serde(skip)]
    pub seconds: f64,
}

pub const SUITES: [&str; 9] = [
    "axioms",
    "integrality-separation",
    "language-separation",
    "prover",
    "oracle-agreement",
    "saturation",
    "refutation",
    "validity-probe",
    "join-reduction",
];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = match name {
        "axioms" => axiom_validity(seed),
        "integrality-separation" => integrality_separation(),
        "language-separation" => language_separation(seed),
        "prover" => prover_soundness(seed, 1000),
        "oracle-agreement" => oracle_agreement(),
        "saturation" => saturation_invariants(20),
        "refutation" => saturation_refutation(),
        "validity-probe" => validity_probe(seed),
        "join-reduction" => join_reduction(seed, 500),
        _ => return Err(Error::Usage(format!("unknown suite '{name}' (expected one of {})", SUITES.join(", ")))),
    }?;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn eq(src: &str) -> Equation {
    parse_equation(src).expect("built-in equation parses")
}

fn term(src: &str) -> Term {
    parse(src).expect("built-in term parses")
}

fn done(name: &'static str, failure: Option<String>, ok: String, details: Value) -> Result<SuiteReport> {
    Ok(SuiteReport { name, passed: failure.is_none(), summary: failure.unwrap_or(ok), details, seconds: 0.0 })
}

/// Every axiom of the integral system with join has no counterexample among
/// integral models (exhaustive to base 2, sampled to base 4), and every
/// axiom of the language system none among language models.
pub fn axiom_validity(seed: u64) -> Result<SuiteReport> {
    let rel = RelSearchBounds { max_base: 4, random_samples: 1000, seed, ..Default::default() };
    let lang = LangSearchBounds { alphabet_size: 2, max_len: 2, seed, ..Default::default() };
    let mut failure = None;
    let mut rows = Vec::new();
    for ax in axiom_list(AxiomSet::IntegralJoin) {
        let out = search_rel_counterexample(&ax.equation, RelMode::Integral, &rel);
        let exhaustive_to_2 = out.stats.spaces.iter().take(2).all(|s| s.exhaustive);
        if out.found() || !exhaustive_to_2 {
            failure.get_or_insert(format!("integral models: axiom {} (exhaustive to base 2: {exhaustive_to_2})", ax.id));
        }
        rows.push(json!({"axiom": ax.id, "space": "integral", "found": out.found(), "stats": out.stats}));
    }
    for ax in axiom_list(AxiomSet::IntegralLang) {
        let out = search_lang_counterexample(&ax.equation, &lang);
        if out.found() {
            failure.get_or_insert(format!("language models: axiom {}", ax.id));
        }
        rows.push(json!({"axiom": ax.id, "space": "language", "found": out.found(), "stats": out.stats}));
    }
    let n = rows.len();
    done("axioms", failure, format!("{n} axiom checks, no counterexamples"), json!(rows))
}

/// `1 & x;y = 1 & y;x` fails in a two-point model but in no integral model
/// up to base 3.
pub fn integrality_separation() -> Result<SuiteReport> {
    let e = eq("1 & x;y = 1 & y;x");
    let general = search_rel_counterexample(&e, RelMode::General, &RelSearchBounds { max_base: 2, ..Default::default() });
    let integral = search_rel_counterexample(
        &e,
        RelMode::Integral,
        &RelSearchBounds { max_base: 3, random_samples: 1000, ..Default::default() },
    );
    let base = general.report.as_ref().and_then(|r| r.rel_model()).map(|m| m.base());
    let failure = if base.is_none() {
        Some("no general counterexample at base 2".to_string())
    } else if integral.found() {
        Some("integral counterexample found".to_string())
    } else {
        None
    };
    done(
        "integrality-separation",
        failure,
        format!("refuted at base {}, none among integral models to base 3", base.unwrap_or(0)),
        json!({"general": general.report, "integral_stats": integral.stats}),
    )
}

/// The empty-word law fails in some integral relation model and holds in
/// every small language model.
pub fn language_separation(seed: u64) -> Result<SuiteReport> {
    let e = eq("x;y & 1 = (x & 1);(y & 1)");
    let rel = search_rel_counterexample(&e, RelMode::Integral, &RelSearchBounds { seed, ..Default::default() });
    let lang = search_lang_counterexample(&e, &LangSearchBounds { seed, ..Default::default() });
    let verified = rel.report.as_ref().is_some_and(|r| {
        r.verify().is_ok() && r.rel_model().is_some_and(|m| is_integral_model(m, DEFAULT_CLOSURE_CAP).is_integral())
    });
    let failure = if !verified {
        Some("no verified integral counterexample".to_string())
    } else if lang.found() {
        Some("language counterexample found".to_string())
    } else {
        None
    };
    let base = rel.report.as_ref().and_then(|r| r.rel_model()).map_or(0, |m| m.base());
    done(
        "language-separation",
        failure,
        format!("refuted by an integral model on {base} points, no language counterexample"),
        json!({"integral": rel.report, "language_stats": lang.stats}),
    )
}

/// Laws the prover must derive within the stated depth.
pub fn derived_laws() -> Vec<(&'static str, Equation, AxiomSet)> {
    vec![
        (
            "subidentity-meet",
            eq("(1 & v1);x;(1 & v2) & (1 & v3);x;(1 & v4) = (1 & v1 & v3);x;(1 & v2 & v4)"),
            AxiomSet::Base,
        ),
        ("left-distribution", eq("(1 & z);(x & y) = (1 & z);x & (1 & z);y"), AxiomSet::Integral),
        ("right-distribution", eq("(x & y);(1 & z) = x;(1 & z) & y;(1 & z)"), AxiomSet::Integral),
    ]
}

fn mode_check(e: &Equation, set: AxiomSet, seed: u64) -> Option<CounterexampleReport> {
    let rel = RelSearchBounds { max_base: 3, random_samples: 40, exhaustive_limit: 1 << 12, seed, ..Default::default() };
    let lang = LangSearchBounds { random_samples: 200, exhaustive_limit: 1 << 12, seed, ..Default::default() };
    match set {
        AxiomSet::Base | AxiomSet::BaseJoin => search_rel_counterexample(e, RelMode::General, &rel).report,
        AxiomSet::Integral | AxiomSet::IntegralJoin => search_rel_counterexample(e, RelMode::Integral, &rel).report,
        AxiomSet::IntegralLang => search_lang_counterexample(e, &lang).report,
        AxiomSet::Commutative | AxiomSet::CommutativeJoin => {
            search_rel_counterexample(e, RelMode::Commutative, &rel).report
        }
    }
}

/// Every axiom is derived at depth 1 and the derived laws at depth 6,
/// every trace replays, and `samples` random derivable equations have no
/// counterexample in the models of their system.
pub fn prover_soundness(seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut failure = None;
    let mut traces: Vec<ProofOutcome> = Vec::new();
    for set in AxiomSet::ALL {
        for ax in axiom_list(set) {
            let out = prove(&ax.equation, set, &Budget::new(1, 10_000))?;
            if !out.is_proved() {
                failure.get_or_insert(format!("axiom {} of {set} not derived at depth 1", ax.id));
            }
            traces.push(out);
        }
    }
    let mut laws = Vec::new();
    for (name, e, set) in derived_laws() {
        let out = prove(&e, set, &Budget::new(6, 200_000))?;
        if !out.is_proved() {
            failure.get_or_insert(format!("law {name} not derived at depth 6"));
        }
        laws.push(json!({"law": name, "status": out.status, "steps": out.trace.len(), "nodes": out.stats.nodes}));
        traces.push(out);
    }
    for out in &traces {
        if out.is_proved() && out.replay().is_err() {
            failure.get_or_insert(format!("trace for {} does not replay", out.goal));
        }
    }
    // Random equations: a random term against a short random rewrite of it.
    let sets = AxiomSet::ALL;
    let jobs: Vec<(usize, AxiomSet, u64)> =
        (0..samples).map(|i| (i, sets[i % sets.len()], seed.wrapping_add(i as u64))).collect();
    let results: Vec<Result<(bool, Option<String>)>> = jobs
        .par_iter()
        .map(|&(i, set, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            // Without join, `0` absorbs most random terms.
            let sig = Signature { join: set.has_join(), zero: set.has_join(), one: true };
            for _ in 0..50 {
                let lhs = random_term(&mut rng, &["x", "y", "z"], 3, sig);
                if lhs.op_count() < 2 {
                    continue;
                }
                let rhs = random_rewrites(&lhs, set, 1 + i % 3, 4, &mut rng);
                if rhs == lhs {
                    continue;
                }
                let e = Equation::eq(lhs, rhs);
                let out = prove(&e, set, &Budget::new(6, 20_000))?;
                if !out.is_proved() {
                    continue;
                }
                if out.replay().is_err() {
                    return Ok((true, Some(format!("random trace for {e} does not replay"))));
                }
                return Ok((true, mode_check(&e, set, s).map(|r| format!("{e} under {set}: counterexample {:?}", r.witness))));
            }
            Ok((false, None))
        })
        .collect();
    let mut proved = 0;
    for r in results {
        let (p, f) = r?;
        proved += p as usize;
        if let Some(f) = f {
            failure.get_or_insert(f);
        }
    }
    if proved < samples {
        failure.get_or_insert(format!("only {proved} of {samples} random equations proved"));
    }
    done(
        "prover",
        failure,
        format!("{} axiom/law traces replay, {proved} random proved equations have no counterexample", traces.len()),
        json!({"laws": laws, "random_proved": proved}),
    )
}

/// The term-graph decision against evaluation in the canonical model, over
/// all join-free pairs with at most 3 operations over two variables.
pub fn oracle_agreement() -> Result<SuiteReport> {
    let terms = enumerate_terms(&["x", "y"], 3, Signature::MEET_COMP_ONE);
    let rows: Vec<Result<(usize, usize, Option<String>)>> = terms
        .par_iter()
        .map(|a| {
            let model = canonical_countermodel(a, &term("x;y").vars())?;
            let g = build_term_graph(a)?;
            let (mut valid, mut disagree) = (0, None);
            for b in &terms {
                let by_eval = model.eval(b)?.contains(g.source, g.target);
                let by_hom = decide_leq_meet_comp_one(a, b)?;
                valid += by_hom as usize;
                if by_eval != by_hom && disagree.is_none() {
                    disagree = Some(format!("{a} <= {b}: homomorphism {by_hom}, evaluation {by_eval}"));
                }
            }
            Ok((terms.len(), valid, disagree))
        })
        .collect();
    let (mut pairs, mut valid, mut failure) = (0, 0, None);
    for r in rows {
        let (p, v, d) = r?;
        pairs += p;
        valid += v;
        if let Some(d) = d {
            failure.get_or_insert(d);
        }
    }
    done(
        "oracle-agreement",
        failure,
        format!("{pairs} pairs over {} terms agree ({valid} valid)", terms.len()),
        json!({"terms": terms.len(), "pairs": pairs, "valid": valid}),
    )
}

pub const SATURATION_THETAS: [&str; 5] = ["x", "x;y", "x;(y & z)", "(1 & z);x", "x;y & u;v"];

/// Runs of `steps` steps report no violated condition at any step.
pub fn saturation_invariants(steps: usize) -> Result<SuiteReport> {
    let mut failure = None;
    let mut rows = Vec::new();
    for src in SATURATION_THETAS {
        let mut g = SatGraph::init(&term(src), &SatBudget::default())?;
        let mut unknown = 0;
        let mut reports = vec![check_invariants(&g)];
        for _ in 0..steps {
            g.run(1)?;
            reports.push(check_invariants(&g));
        }
        for r in &reports {
            let v = r.violations();
            if !v.is_empty() {
                failure.get_or_insert(format!("theta {src}, step {}: {}", r.step, v.join(", ")));
            }
            unknown += r.conditions().iter().filter(|(_, s)| matches!(s, crate::saturation::Status::Unknown { .. })).count();
        }
        let last = reports.last().expect("at least one report");
        rows.push(json!({"theta": src, "nodes": g.nodes, "edges": g.edge_count(), "unknown": unknown, "last": last}));
    }
    done("saturation", failure, format!("{} thetas, {steps} steps, no violations", SATURATION_THETAS.len()), json!(rows))
}

/// Refutations found by saturation re-verify from scratch; a valid
/// inequality yields none.
pub fn saturation_refutation() -> Result<SuiteReport> {
    let budget = SatBudget::default();
    let mut failure = None;
    let mut rows = Vec::new();
    for (a, b) in [("x;y", "x"), ("x", "x & y"), ("x;y", "y;x")] {
        let r = refute(&term(a), &term(b), 20, &budget)?;
        let ok = r.report.as_ref().is_some_and(|rep| {
            rep.verify().is_ok() && rep.rel_model().is_some_and(|m| is_integral_model(m, DEFAULT_CLOSURE_CAP).is_integral())
        });
        if !ok {
            failure.get_or_insert(format!("{a} <= {b} not refuted: {:?}", r.checks));
        }
        rows.push(json!({"inequality": format!("{a} <= {b}"), "report": r.report, "nodes": r.graph.nodes}));
    }
    let r = refute(&term("x"), &term("x"), 20, &budget)?;
    if r.report.is_some() {
        failure.get_or_insert("x <= x refuted".to_string());
    }
    rows.push(json!({"inequality": "x <= x", "report": r.report}));
    done("refutation", failure, "3 refutations verified, x <= x stands".to_string(), json!(rows))
}

/// `1 & x;y <= x;(1 & y;x);y` has no counterexample among relation or
/// language models; the derivation attempt is reported either way.
pub fn validity_probe(seed: u64) -> Result<SuiteReport> {
    let e = eq("1 & x;y <= x;(1 & y;x);y");
    let rel = search_rel_counterexample(&e, RelMode::General, &RelSearchBounds { max_base: 4, seed, ..Default::default() });
    let lang = search_lang_counterexample(&e, &LangSearchBounds { seed, ..Default::default() });
    let proof = prove(&e, AxiomSet::Integral, &Budget::new(10, 200_000))?;
    let failure = if rel.found() || lang.found() {
        Some("counterexample found".to_string())
    } else {
        None
    };
    let status = match proof.status {
        ProofStatus::Proved => format!("proved in {} steps", proof.trace.len()),
        ProofStatus::Unknown => "unknown".to_string(),
    };
    done(
        "validity-probe",
        failure,
        format!("no counterexample; derivation from the integral axioms: {status}"),
        json!({"relation_stats": rel.stats, "language_stats": lang.stats, "proof": proof}),
    )
}

/// Join reduction with the term-graph oracle against exhaustive search at
/// base 2: a counterexample there must come with an invalid verdict.
pub fn join_reduction(seed: u64, samples: usize) -> Result<SuiteReport> {
    let exhaustive = RelSearchBounds { max_base: 2, random_samples: 0, ..Default::default() };
    let rows: Vec<Result<(Verdict, bool, Option<String>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let a = random_term(&mut rng, &["x", "y"], 3, Signature::FULL);
            let b = random_term(&mut rng, &["x", "y"], 3, Signature::FULL);
            let reduction = decide_with_join_reduction(&a, &b, term_graph_oracle)?;
            let search = search_rel_counterexample(&Equation::leq(a.clone(), b.clone()), RelMode::General, &exhaustive);
            let bad = (search.found() && reduction.verdict != Verdict::Invalid)
                || (!search.stats.exhaustive())
                || reduction.verdict == Verdict::Unknown;
            Ok((reduction.verdict, search.found(), bad.then(|| format!("{a} <= {b}: reduction {:?}", reduction.verdict))))
        })
        .collect();
    let (mut decisive, mut valid, mut failure) = (0, 0, None);
    for r in rows {
        let (v, found, bad) = r?;
        decisive += found as usize;
        valid += (v == Verdict::Valid) as usize;
        if let Some(b) = bad {
            failure.get_or_insert(b);
        }
    }
    done(
        "join-reduction",
        failure,
        format!("{samples} inequalities, {decisive} refuted at base 2 and all judged invalid, {valid} judged valid"),
        json!({"samples": samples, "decisive": decisive, "valid": valid}),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for name in ["integrality-separation", "refutation"] {
            let r = run_suite(name, 7).unwrap();
            assert!(r.passed, "{name}: {}", r.summary);
        }
        assert!(run_suite("nope", 0).is_err());
    }

    #[test]
    fn small_prover_sample() {
        let r = prover_soundness(3, 30).unwrap();
        assert!(r.passed, "{}", r.summary);
    }
}
