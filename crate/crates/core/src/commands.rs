//! The command layer behind the `relmon` binary. Each command returns a
//! [`CommandResult`] whose JSON shape is shared across commands and holds
//! nothing time-dependent, so equal inputs and seeds give equal bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::AxiomSet;
use crate::error::{Error, Result};
use crate::model::{search_lang_counterexample, search_rel_counterexample, LangSearchBounds, RelMode, RelSearchBounds};
use crate::prover::{prove, Budget};
use crate::saturation::{check_invariants, refute, SatBudget, SatGraph};
use crate::selftest::{run_suite, SUITES};
use crate::term::{parse, parse_equation, render, Equation, EquationKind};
use crate::termgraph::{
    build_term_graph, decide_leq, decide_with_join_reduction, integral_oracle, term_graph_oracle, to_dot, Verdict as Pair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Proved,
    Refuted,
    Valid,
    Invalid,
    Unknown,
    Ok,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub command: &'static str,
    pub verdict: Verdict,
    /// Checks that failed; any entry makes the exit code 1.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub payload: Value,
    pub stats: Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub dot: Option<String>,
}

impl CommandResult {
    fn new(command: &'static str, verdict: Verdict, payload: Value, stats: Value, text: String) -> Self {
        CommandResult { command, verdict, failures: Vec::new(), payload, stats, text, dot: None }
    }

    /// 0 for a definite verdict, 2 for unknown, 1 for failed checks.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            1
        } else if self.verdict == Verdict::Unknown {
            2
        } else {
            0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefuteMode {
    Rel,
    RelIntegral,
    RelCommutative,
    Lang,
}

impl FromStr for RefuteMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "rel" => RefuteMode::Rel,
            "rel-integral" => RefuteMode::RelIntegral,
            "rel-commutative" => RefuteMode::RelCommutative,
            "lang" => RefuteMode::Lang,
            _ => return Err(format!("unknown mode '{s}' (expected rel, rel-integral, rel-commutative or lang)")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceOracle {
    /// Exact for relation models.
    TermGraph,
    /// Bounded: the integral prover, then integral model search.
    Integral,
}

impl FromStr for ReduceOracle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "term-graph" => Ok(ReduceOracle::TermGraph),
            "integral" => Ok(ReduceOracle::Integral),
            _ => Err(format!("unknown oracle '{s}' (expected term-graph or integral)")),
        }
    }
}

pub fn cmd_prove(equation: &str, axioms: AxiomSet, budget: &Budget) -> Result<CommandResult> {
    let eq = parse_equation(equation)?;
    let out = prove(&eq, axioms, budget)?;
    let verdict = if out.is_proved() { Verdict::Proved } else { Verdict::Unknown };
    let mut text = format!("{}: {eq} under {axioms}\n", if out.is_proved() { "proved" } else { "unknown" });
    for (i, s) in out.trace.iter().enumerate() {
        let _ = writeln!(text, "  {:>2}. {} [{} {:?}]", i + 1, s.to, s.axiom, s.direction);
    }
    let _ = write!(text, "  {} terms stored", out.stats.nodes);
    let stats = serde_json::to_value(&out.stats)?;
    Ok(CommandResult::new("prove", verdict, serde_json::to_value(&out)?, stats, text))
}

pub fn cmd_refute(equation: &str, mode: RefuteMode, rel: &RelSearchBounds, lang: &LangSearchBounds) -> Result<CommandResult> {
    let eq = parse_equation(equation)?;
    let out = match mode {
        RefuteMode::Rel => search_rel_counterexample(&eq, RelMode::General, rel),
        RefuteMode::RelIntegral => search_rel_counterexample(&eq, RelMode::Integral, rel),
        RefuteMode::RelCommutative => search_rel_counterexample(&eq, RelMode::Commutative, rel),
        RefuteMode::Lang => search_lang_counterexample(&eq, lang),
    };
    let stats = serde_json::to_value(&out.stats)?;
    Ok(match out.report {
        Some(report) => {
            report.verify()?;
            let text = format!("refuted: {eq}\n  witness {:?}\n  {}", report.witness, serde_json::to_string(&report.model)?);
            CommandResult::new("refute", Verdict::Refuted, serde_json::to_value(&report)?, stats, text)
        }
        None => {
            let scope = if out.stats.exhaustive() { "exhaustive" } else { "sampled" };
            let text = format!("no counterexample for {eq} ({scope} search)");
            CommandResult::new("refute", Verdict::Unknown, Value::Null, stats, text)
        }
    })
}

/// Decides a join-free inequality by term graphs; with joins, through the
/// join reduction. An equation is decided as two inequalities.
pub fn cmd_decide(inequality: &str) -> Result<CommandResult> {
    let eq = parse_equation(inequality)?;
    let sides = match eq.kind {
        EquationKind::Leq => vec![(eq.lhs.clone(), eq.rhs.clone())],
        EquationKind::Eq => vec![(eq.lhs.clone(), eq.rhs.clone()), (eq.rhs.clone(), eq.lhs.clone())],
    };
    let mut parts = Vec::new();
    let mut valid = true;
    let mut text = String::new();
    for (a, b) in sides {
        if a.contains_join() || b.contains_join() {
            let r = decide_with_join_reduction(&a, &b, term_graph_oracle)?;
            valid &= r.verdict == Pair::Valid;
            let _ = writeln!(text, "{a} <= {b}: {:?} by join reduction", r.verdict);
            parts.push(json!({"lhs": a, "rhs": b, "reduction": r}));
        } else {
            let d = decide_leq(&a, &b)?;
            valid &= d.valid;
            let _ = writeln!(text, "{a} <= {b}: {}", if d.valid { "valid" } else { "invalid" });
            if let Some(c) = &d.countermodel {
                let _ = writeln!(text, "  countermodel {}", serde_json::to_string(&c.model)?);
            }
            parts.push(json!({"lhs": a, "rhs": b, "decision": d}));
        }
    }
    let verdict = if valid { Verdict::Valid } else { Verdict::Invalid };
    Ok(CommandResult::new("decide", verdict, json!(parts), Value::Null, text.trim_end().to_string()))
}

pub struct SaturateOptions {
    pub theta: String,
    pub refute: Option<String>,
    pub steps: usize,
    pub check_invariants: bool,
    pub budget: SatBudget,
}

pub fn cmd_saturate(opts: &SaturateOptions) -> Result<CommandResult> {
    let theta = parse(&opts.theta)?;
    let (graph, refutation) = match &opts.refute {
        Some(tp) => {
            let r = refute(&theta, &parse(tp)?, opts.steps, &opts.budget)?;
            (r.graph, Some((r.checks, r.report)))
        }
        None => {
            let mut g = SatGraph::init(&theta, &opts.budget)?;
            g.run(opts.steps)?;
            (g, None)
        }
    };
    let mut failures = Vec::new();
    let invariants = if opts.check_invariants {
        // Re-run step by step so every prefix is checked.
        let mut g = SatGraph::init(&theta, &opts.budget)?;
        let mut reports = vec![check_invariants(&g)];
        for _ in 0..opts.steps {
            g.run(1)?;
            reports.push(check_invariants(&g));
        }
        for r in &reports {
            for v in r.violations() {
                failures.push(format!("step {}: {v} violated", r.step));
            }
        }
        Some(reports)
    } else {
        None
    };
    let mut text = format!("{} nodes, {} edges after {} steps", graph.nodes, graph.edge_count(), graph.steps);
    let verdict = match &refutation {
        Some((_, Some(report))) => {
            let _ = write!(text, "\nrefuted: {}\n  {}", report.equation, serde_json::to_string(&report.model)?);
            Verdict::Refuted
        }
        Some((checks, None)) => {
            let _ = write!(text, "\nnot refuted: {checks:?}");
            Verdict::Unknown
        }
        None => Verdict::Ok,
    };
    if let Some(reports) = &invariants {
        let _ = write!(text, "\ninvariants checked at {} steps, {} violations", reports.len(), failures.len());
    }
    let model = graph.extract_model(&Default::default())?;
    let payload = json!({
        "graph": graph.to_json(),
        "model": model,
        "refutation": refutation.as_ref().map(|(c, r)| json!({"checks": c, "report": r})),
        "invariants": invariants,
    });
    let stats = json!({"nodes": graph.nodes, "edges": graph.edge_count(), "steps": graph.steps, "pending": graph.pending()});
    let mut result = CommandResult::new("saturate", verdict, payload, stats, text);
    result.failures = failures;
    result.dot = Some(graph.to_dot());
    Ok(result)
}

pub fn cmd_graph(term: &str) -> Result<CommandResult> {
    let t = parse(term)?;
    let g = build_term_graph(&t)?;
    let text = format!("{}: {} nodes, {} edges, source {}, target {}", render(&t), g.nodes, g.edges.len(), g.source, g.target);
    let mut result = CommandResult::new("graph", Verdict::Ok, serde_json::to_value(&g)?, Value::Null, text);
    result.dot = Some(to_dot(&g));
    Ok(result)
}

pub fn cmd_reduce(inequality: &str, oracle: ReduceOracle, budget: &Budget, bounds: &RelSearchBounds) -> Result<CommandResult> {
    let eq: Equation = parse_equation(inequality)?;
    if eq.kind != EquationKind::Leq {
        return Err(Error::Usage("reduce takes an inequality 'a <= b'".into()));
    }
    let r = match oracle {
        ReduceOracle::TermGraph => decide_with_join_reduction(&eq.lhs, &eq.rhs, term_graph_oracle)?,
        ReduceOracle::Integral => decide_with_join_reduction(&eq.lhs, &eq.rhs, integral_oracle(budget, bounds))?,
    };
    let verdict = match r.verdict {
        Pair::Valid => Verdict::Valid,
        Pair::Invalid => Verdict::Invalid,
        Pair::Unknown => Verdict::Unknown,
    };
    let mut text = format!("{eq}: {:?}", r.verdict);
    for (i, m) in r.matched.iter().enumerate() {
        let rhs = m.map_or("none".to_string(), |j| r.rhs_disjuncts[j].to_string());
        let _ = write!(text, "\n  {} <= {rhs}", r.lhs_disjuncts[i]);
    }
    Ok(CommandResult::new("reduce", verdict, serde_json::to_value(&r)?, Value::Null, text))
}

pub fn cmd_selftest(suite: Option<&str>, seed: u64) -> Result<CommandResult> {
    let names: Vec<&str> = match suite {
        Some(s) => vec![s],
        None => SUITES.to_vec(),
    };
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut failures = Vec::new();
    for name in names {
        let r = run_suite(name, seed)?;
        let _ = writeln!(text, "{:<24} {} ({:.1}s) {}", r.name, if r.passed { "pass" } else { "FAIL" }, r.seconds, r.summary);
        if !r.passed {
            failures.push(format!("{}: {}", r.name, r.summary));
        }
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let stats = json!({"suites": reports.len(), "passed": passed});
    let mut result = CommandResult::new("selftest", Verdict::Ok, serde_json::to_value(&reports)?, stats, text.trim_end().to_string());
    result.failures = failures;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prove_examples() {
        let b = Budget::default();
        assert_eq!(cmd_prove("(1&x);(1&y) = 1 & x & y", AxiomSet::Base, &b).unwrap().verdict, Verdict::Proved);
        let r = cmd_prove("1 & x;y = 1 & y;x", AxiomSet::Integral, &b).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        assert_eq!(r.payload["trace"].as_array().unwrap().len(), 1);
        let r = cmd_prove("1 & x;y = 1 & y;x", AxiomSet::Base, &Budget::new(6, 20_000)).unwrap();
        assert_eq!((r.verdict, r.exit_code()), (Verdict::Unknown, 2));
        assert!(matches!(cmd_prove("x &", AxiomSet::Base, &b), Err(Error::Parse(_))));
    }

    #[test]
    fn refute_examples() {
        let (rel, lang) = (RelSearchBounds::default(), LangSearchBounds::default());
        let e = "x;y & 1 = (x&1);(y&1)";
        assert_eq!(cmd_refute(e, RefuteMode::RelIntegral, &rel, &lang).unwrap().verdict, Verdict::Refuted);
        assert_eq!(cmd_refute(e, RefuteMode::Lang, &rel, &lang).unwrap().verdict, Verdict::Unknown);
        let probe = "1 & x;y <= x;(1 & y;x);y";
        assert_eq!(cmd_refute(probe, RefuteMode::Rel, &rel, &lang).unwrap().verdict, Verdict::Unknown);
        assert!("bogus".parse::<RefuteMode>().is_err());
    }

    #[test]
    fn decide_examples() {
        assert_eq!(cmd_decide("x & y <= x").unwrap().verdict, Verdict::Valid);
        let r = cmd_decide("x;y <= x").unwrap();
        assert_eq!(r.verdict, Verdict::Invalid);
        assert_eq!(r.payload[0]["decision"]["countermodel"]["model"]["base"], 3);
        assert_eq!(cmd_decide("x;(y+z) <= x;y + x;z").unwrap().verdict, Verdict::Valid);
        assert_eq!(cmd_decide("x;(y+z) = x;y + x;z").unwrap().verdict, Verdict::Valid);
    }

    #[test]
    fn saturate_examples() {
        let opts = |theta: &str, refute: Option<&str>, steps, check| SaturateOptions {
            theta: theta.into(),
            refute: refute.map(Into::into),
            steps,
            check_invariants: check,
            budget: SatBudget::default(),
        };
        let r = cmd_saturate(&opts("x;y", Some("x"), 5, false)).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let r = cmd_saturate(&opts("x;y", None, 3, true)).unwrap();
        assert_eq!((r.verdict, r.exit_code()), (Verdict::Ok, 0));
        assert!(matches!(cmd_saturate(&opts("0", None, 3, false)), Err(Error::ZeroTheta(_))));
    }

    #[test]
    fn json_is_deterministic() {
        let a = serde_json::to_string(&cmd_saturate(&SaturateOptions {
            theta: "x;y & u;v".into(),
            refute: Some("x;y;u".into()),
            steps: 6,
            check_invariants: true,
            budget: SatBudget::default(),
        })
        .unwrap())
        .unwrap();
        let b = serde_json::to_string(&cmd_saturate(&SaturateOptions {
            theta: "x;y & u;v".into(),
            refute: Some("x;y;u".into()),
            steps: 6,
            check_invariants: true,
            budget: SatBudget::default(),
        })
        .unwrap())
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn graph_and_reduce() {
        let r = cmd_graph("x;(y & z)").unwrap();
        assert_eq!(r.payload["nodes"], 3);
        assert!(r.dot.unwrap().starts_with("digraph"));
        assert!(cmd_graph("x + y").is_err());
        let r = cmd_reduce("x + y <= y + x", ReduceOracle::TermGraph, &Budget::default(), &RelSearchBounds::default());
        assert_eq!(r.unwrap().verdict, Verdict::Valid);
        assert!(cmd_reduce("x = y", ReduceOracle::TermGraph, &Budget::default(), &RelSearchBounds::default()).is_err());
    }
}
