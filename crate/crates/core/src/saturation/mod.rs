//! Step-indexed saturation: a finite prefix of the graph sequence whose
//! limit is the integral countermodel of an underivable `theta <= theta'`.
//!
//! Nodes are points of the model under construction. Each edge carries a
//! filter of terms, described by its cores; the model reads a variable as
//! the edges whose filter contains it. A step takes a composition `tau;sigma`
//! from some label and makes sure a node splits it, either an endpoint (when
//! one factor lies above the identity) or a fresh node.

mod check;
mod filter;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::axioms::AxiomSet;
use crate::error::Result;
use crate::model::{is_integral_model, CounterexampleReport, RelModel, Relation, DEFAULT_CLOSURE_CAP, MAX_BASE};
use crate::prover::prove_leq;
use crate::term::{render, Equation, Term};
use crate::termgraph::decide_leq_meet_comp_one;

pub use check::{check_invariants, InvariantReport, Status};
pub use filter::{build_basis, FilterDescriptor, Membership, MembershipOracle, SatBudget, SubidentityBasis};

/// A composition to be split on the edge `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Task {
    pub u: usize,
    pub v: usize,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepOutcome {
    /// A fresh node `w` now splits the composition.
    Split { w: usize },
    /// The first factor lies above the identity, so `u` itself splits it.
    AbsorbedLeft,
    /// The remaining factors lie above the identity, so `v` splits it.
    AbsorbedRight,
    /// Some node already splits it.
    Witnessed { via: usize },
    Discarded { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Query {
    pub sigma: Term,
    pub cores: Vec<Term>,
    pub verdict: Membership,
}

#[derive(Clone, Debug, Serialize)]
pub struct Event {
    pub step: usize,
    pub task: Task,
    pub outcome: StepOutcome,
    pub queries: Vec<Query>,
}

#[derive(Clone, Debug)]
pub struct SatGraph {
    pub theta: Term,
    pub basis: SubidentityBasis,
    pub oracle: MembershipOracle,
    pub nodes: usize,
    pub u0: usize,
    pub v0: usize,
    pub labels: BTreeMap<(usize, usize), FilterDescriptor>,
    pub witnesses: BTreeSet<(usize, usize)>,
    pub queue: VecDeque<Task>,
    pub steps: usize,
    pub log: Vec<Event>,
    /// Every task ever enqueued, so each is queued once.
    seen: BTreeSet<Task>,
    absorbed: BTreeSet<Task>,
}

fn compositions(t: &Term) -> impl Iterator<Item = &Term> {
    t.meet_view().iter().filter(|c| matches!(c, Term::Comp(_)))
}

impl SatGraph {
    /// The two-node graph for `theta`, or the one-node graph when
    /// `theta <= 1` is derivable.
    pub fn init(theta: &Term, budget: &SatBudget) -> Result<SatGraph> {
        let basis = build_basis(theta, budget)?;
        let theta = basis.theta.clone();
        let oracle = MembershipOracle::new(basis.eps.clone(), budget.membership.clone());
        let merged = decide_leq_meet_comp_one(&theta, &Term::Ide)?
            || prove_leq(&theta, &Term::Ide, AxiomSet::Integral, &budget.membership)?.is_proved();
        let mut g = SatGraph {
            theta: theta.clone(),
            basis,
            oracle,
            nodes: if merged { 1 } else { 2 },
            u0: 0,
            v0: if merged { 0 } else { 1 },
            labels: BTreeMap::new(),
            witnesses: BTreeSet::new(),
            queue: VecDeque::new(),
            steps: 0,
            log: Vec::new(),
            seen: BTreeSet::new(),
            absorbed: BTreeSet::new(),
        };
        for n in 0..g.nodes {
            g.labels.insert((n, n), FilterDescriptor::e());
            g.witnesses.insert((n, n));
        }
        if !merged {
            g.labels.insert((0, 1), FilterDescriptor::new(vec![theta.clone()]));
            g.witnesses.insert((0, 1));
        }
        // With one node, `theta` is in the diagonal filter and its
        // compositions need splitting there.
        g.enqueue(g.u0, g.v0, &theta);
        Ok(g)
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.labels.contains_key(&(u, v))
    }

    pub fn label(&self, u: usize, v: usize) -> Option<&FilterDescriptor> {
        self.labels.get(&(u, v))
    }

    fn enqueue(&mut self, u: usize, v: usize, core: &Term) {
        for c in compositions(core) {
            let task = Task { u, v, term: c.clone() };
            if self.seen.insert(task.clone()) {
                self.queue.push_back(task);
            }
        }
    }

    /// Syntactic or term-graph membership; never calls the prover.
    fn quick_member(&self, sigma: &Term, f: &FilterDescriptor) -> bool {
        let conj = f.conjuncts();
        if sigma.meet_view().iter().all(|c| conj.contains(c)) {
            return true;
        }
        !sigma.contains_join()
            && !sigma.contains_zero()
            && (decide_leq_meet_comp_one(&f.core_meet(), sigma).unwrap_or(false)
                || decide_leq_meet_comp_one(&self.oracle.bottom(f), sigma).unwrap_or(false))
    }

    /// A node `w` and a split of `task.term` into a prefix in `l(u,w)` and
    /// a suffix in `l(w,v)`.
    pub fn witness_of(&self, task: &Task) -> Option<usize> {
        if self.absorbed.contains(task) {
            return Some(task.u);
        }
        let factors = task.term.comp_view();
        for k in 1..factors.len() {
            let prefix = Term::comp(factors[..k].iter().cloned());
            let suffix = Term::comp(factors[k..].iter().cloned());
            for w in 0..self.nodes {
                let (Some(a), Some(b)) = (self.label(task.u, w), self.label(w, task.v)) else { continue };
                if self.quick_member(&prefix, a) && self.quick_member(&suffix, b) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Queued tasks that no node splits yet.
    pub fn pending(&self) -> usize {
        self.queue.iter().filter(|t| self.witness_of(t).is_none()).count()
    }

    /// Processes one task; the queue is left alone.
    pub fn apply_step(&mut self, task: &Task) -> Result<StepOutcome> {
        self.steps += 1;
        let mut queries = Vec::new();
        let outcome = self.step_inner(task, &mut queries);
        self.log.push(Event { step: self.steps, task: task.clone(), outcome: outcome.clone(), queries });
        Ok(outcome)
    }

    fn step_inner(&mut self, task: &Task, queries: &mut Vec<Query>) -> StepOutcome {
        let (u, v) = (task.u, task.v);
        let discard = |reason: &str| StepOutcome::Discarded { reason: reason.to_string() };
        let Some(label) = self.label(u, v).cloned() else { return discard("no such edge") };
        let factors = task.term.comp_view().to_vec();
        if factors.len() < 2 {
            return discard("not a composition");
        }
        let mut ask = |sigma: &Term, f: &FilterDescriptor| {
            let verdict = self.oracle.member(sigma, f);
            queries.push(Query { sigma: sigma.clone(), cores: f.cores.clone(), verdict });
            verdict
        };
        if !ask(&task.term, &label).is_member() {
            return discard("not a member of the label");
        }
        if let Some(via) = self.witness_of(task) {
            return StepOutcome::Witnessed { via };
        }
        let tau = factors[0].clone();
        let sigma = Term::comp(factors[1..].iter().cloned());
        if ask(&Term::Ide, &FilterDescriptor::new(vec![tau.clone()])).is_member() {
            self.absorb(task, u, v, &sigma, (u, u), &tau);
            return StepOutcome::AbsorbedLeft;
        }
        if ask(&Term::Ide, &FilterDescriptor::new(vec![sigma.clone()])).is_member() {
            self.absorb(task, u, v, &tau, (v, v), &sigma);
            return StepOutcome::AbsorbedRight;
        }
        if self.nodes >= MAX_BASE {
            return discard("node limit reached");
        }
        StepOutcome::Split { w: self.split(u, v, &tau, &sigma) }
    }

    /// The factor above the identity lands on a diagonal, which already is
    /// the subidentity filter; the other factor becomes a core of `(u,v)`.
    fn absorb(&mut self, task: &Task, u: usize, v: usize, kept: &Term, diag: (usize, usize), unit: &Term) {
        self.absorbed.insert(task.clone());
        if let Some(l) = self.labels.get_mut(&(u, v)) {
            if l.add_core(kept.clone()) {
                self.enqueue(u, v, kept);
            }
        }
        self.enqueue(diag.0, diag.1, unit);
    }

    fn split(&mut self, u: usize, v: usize, tau: &Term, sigma: &Term) -> usize {
        let w = self.nodes;
        self.nodes += 1;
        let mut fresh = vec![((w, w), FilterDescriptor::e())];
        for (&(t, s), l) in &self.labels {
            if s == u {
                fresh.push(((t, w), FilterDescriptor::new(vec![Term::comp2(l.core_meet(), tau.clone())])));
            }
            if t == v {
                fresh.push(((w, s), FilterDescriptor::new(vec![Term::comp2(sigma.clone(), l.core_meet())])));
            }
        }
        for (edge, l) in fresh {
            for core in &l.cores {
                self.enqueue(edge.0, edge.1, core);
            }
            self.labels.insert(edge, l);
        }
        self.witnesses.extend([(u, w), (w, v), (w, w)]);
        w
    }

    /// Pops tasks until `steps` have run or every queued task is split.
    /// Witnessed tasks go back to the end of the queue.
    pub fn run(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            if self.pending() == 0 {
                break;
            }
            let Some(task) = self.queue.pop_front() else { break };
            let outcome = self.apply_step(&task)?;
            if matches!(outcome, StepOutcome::Witnessed { .. } | StepOutcome::AbsorbedLeft | StepOutcome::AbsorbedRight) {
                self.queue.push_back(task);
            }
        }
        Ok(())
    }

    /// Reads each variable as the set of edges whose filter contains it.
    pub fn extract_model(&self, extra: &BTreeSet<Arc<str>>) -> Result<RelModel> {
        let mut m = RelModel::new(self.nodes)?;
        for x in self.theta.vars().iter().chain(extra) {
            let xt = Term::Var(x.clone());
            let pairs = self.labels.iter().filter(|(_, l)| self.oracle.member(&xt, l).is_member()).map(|(e, _)| *e);
            m.set(x, Relation::from_pairs(self.nodes, pairs))?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> SatGraphJson {
        SatGraphJson {
            theta: self.theta.clone(),
            nodes: self.nodes,
            u0: self.u0,
            v0: self.v0,
            generators: self.basis.generators.clone(),
            steps: self.steps,
            edges: self
                .labels
                .iter()
                .map(|(&(from, to), l)| EdgeJson { from, to, cores: l.cores.clone(), witness: self.witnesses.contains(&(from, to)) })
                .collect(),
            queue: self.queue.iter().cloned().collect(),
        }
    }

    /// Graphviz rendering: witness edges bold, diagonal loops dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph saturation {\n  rankdir=LR;\n");
        for n in 0..self.nodes {
            let shape = if n == self.u0 || n == self.v0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  n{n} [label=\"{n}\", shape={shape}];");
        }
        for (&(a, b), l) in &self.labels {
            let cores: Vec<String> = l.cores.iter().map(render).collect();
            let label = cores.join(", ").replace('"', "\\\"");
            let style = if a == b {
                "dashed"
            } else if self.witnesses.contains(&(a, b)) {
                "bold"
            } else {
                "solid"
            };
            let _ = writeln!(out, "  n{a} -> n{b} [label=\"{label}\", style={style}];");
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub cores: Vec<Term>,
    pub witness: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SatGraphJson {
    pub theta: Term,
    pub nodes: usize,
    pub u0: usize,
    pub v0: usize,
    pub generators: Vec<Term>,
    pub steps: usize,
    pub edges: Vec<EdgeJson>,
    pub queue: Vec<Task>,
}

/// The independent checks behind a refutation.
#[derive(Clone, Debug, Serialize)]
pub struct RefuteChecks {
    pub in_theta: bool,
    pub in_theta_prime: bool,
    pub integral: bool,
}

#[derive(Clone, Debug)]
pub struct Refutation {
    pub graph: SatGraph,
    pub checks: RefuteChecks,
    /// Present only when every check passed.
    pub report: Option<CounterexampleReport>,
}

/// Runs saturation on `theta` and tests the extracted model against
/// `theta <= theta_prime`. The model is re-evaluated from scratch; nothing
/// the construction believes is trusted.
pub fn refute(theta: &Term, theta_prime: &Term, steps: usize, budget: &SatBudget) -> Result<Refutation> {
    let mut graph = SatGraph::init(theta, budget)?;
    graph.run(steps)?;
    let theta_prime = theta_prime.normalize();
    let model = graph.extract_model(&theta_prime.vars())?;
    let (u0, v0) = (graph.u0, graph.v0);
    let in_theta = model.eval(&graph.theta)?.contains(u0, v0);
    let in_theta_prime = model.eval(&theta_prime)?.contains(u0, v0);
    let integral = in_theta && !in_theta_prime && is_integral_model(&model, DEFAULT_CLOSURE_CAP).is_integral();
    let checks = RefuteChecks { in_theta, in_theta_prime, integral };
    let report = if in_theta && !in_theta_prime && integral {
        Some(CounterexampleReport::for_rel(&Equation::leq(graph.theta.clone(), theta_prime), model, true, false)?)
    } else {
        None
    };
    Ok(Refutation { graph, checks, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn run(theta: &str, steps: usize) -> SatGraph {
        let mut g = SatGraph::init(&t(theta), &SatBudget::default()).unwrap();
        g.run(steps).unwrap();
        g
    }

    #[test]
    fn step_counts() {
        assert_eq!(run("x;y", 1).nodes, 3);
        assert_eq!(run("x", 10).nodes, 2);
        let g = run("1 & x", 5);
        assert_eq!((g.nodes, g.u0, g.v0), (1, 0, 0));
        let g = run("x;y;z", 10);
        assert_eq!(g.nodes, 4);
        assert_eq!(g.pending(), 0);
    }

    #[test]
    fn absorption() {
        // Already split at the source: `1 & z` is in the diagonal filter.
        let g = run("(1 & z);x", 5);
        assert_eq!(g.nodes, 2);
        assert!(g.log.is_empty());
        assert_eq!(g.witness_of(&g.queue[0]), Some(0));

        let mut g = run("x", 0);
        let c = t("(1 & y;w);z");
        g.labels.get_mut(&(0, 1)).unwrap().add_core(c.clone());
        let task = Task { u: 0, v: 1, term: c };
        assert_eq!(g.apply_step(&task).unwrap(), StepOutcome::AbsorbedLeft);
        assert!(g.label(0, 1).unwrap().cores.contains(&t("z")));
        assert_eq!(g.witness_of(&task), Some(0));
        assert_eq!(g.nodes, 2);
    }

    #[test]
    fn new_node_labels() {
        let g = run("x;y", 1);
        assert_eq!(g.label(0, 2).unwrap().cores, vec![t("x")]);
        assert_eq!(g.label(2, 1).unwrap().cores, vec![t("y")]);
        assert!(g.label(2, 2).unwrap().is_e());
        assert!(g.witnesses.contains(&(0, 2)) && g.witnesses.contains(&(2, 1)));
        let m = g.extract_model(&BTreeSet::new()).unwrap();
        assert_eq!(m.get("x").unwrap(), &Relation::from_pairs(3, [(0, 2)]));
    }

    #[test]
    fn refutations() {
        let b = SatBudget::default();
        for (a, c) in [("x;y", "x"), ("x", "x & y"), ("x;y", "y;x"), ("x;(y & z)", "x;y & x;z;z"), ("(1 & z);x", "z")] {
            let r = refute(&t(a), &t(c), 10, &b).unwrap();
            let report = r.report.unwrap_or_else(|| panic!("{a} <= {c}: {:?}", r.checks));
            report.verify().unwrap();
            assert!(report.integral);
        }
        let r = refute(&t("x"), &t("x"), 10, &b).unwrap();
        assert!(r.report.is_none() && r.checks.in_theta_prime);
        let r = refute(&t("(1 & z);x"), &t("x"), 10, &b).unwrap();
        assert!(r.report.is_none());
    }

    #[test]
    fn dot_and_json() {
        let g = run("x;y", 3);
        let dot = g.to_dot();
        assert!(dot.contains("style=bold") && dot.contains("style=dashed"));
        let j = serde_json::to_value(g.to_json()).unwrap();
        assert_eq!(j["nodes"], 3);
        assert_eq!(j["theta"], "x;y");
    }
}
