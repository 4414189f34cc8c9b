//! Bounded equational proof search.
//!
//! Both sides of the goal are expanded breadth-first by one-step rewrites
//! with every axiom in both directions at every position, until the two
//! searches share a term. Terms are kept in normal form throughout, so the
//! semilattice, monoid and zero laws cost nothing.
//!
//! A `Proved` outcome carries a trace that [`replay`] re-checks from the
//! axiom table alone. `Unknown` only means the budget ran out; the prover
//! never claims an equation is underivable.

mod matching;
mod rules;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use matching::Focus;
pub use rules::Direction;

use crate::axioms::{axiom_list, AxiomSet};
use crate::error::{Error, Result};
use crate::term::{Equation, Term};
use rules::{compile, rules_of, Codec, Rewriter, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Total rewrite steps, counted over both directions of the search.
    pub max_depth: usize,
    /// Distinct terms the search may store.
    pub max_nodes: usize,
    /// Intermediate terms may exceed the larger goal side by this many nodes.
    pub size_slack: usize,
    /// Draw instances for unbound metavariables from the whole current term
    /// rather than from the goal only.
    pub wide_pool: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 6, max_nodes: 200_000, size_slack: 8, wide_pool: false }
    }
}

impl Budget {
    pub fn new(max_depth: usize, max_nodes: usize) -> Self {
        Budget { max_depth, max_nodes, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofStatus {
    Proved,
    Unknown,
}

/// One rewrite in a proof. The rewrite is applied to `from`, or to `to`
/// when `flipped` (steps found by the search from the right-hand side are
/// used backwards).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub path: Vec<usize>,
    pub axiom: String,
    pub direction: Direction,
    pub substitution: BTreeMap<String, Term>,
    pub focus: Focus,
    pub flipped: bool,
    pub from: Term,
    pub to: Term,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    pub nodes: usize,
    pub expanded: usize,
    pub left_depth: usize,
    pub right_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofOutcome {
    pub status: ProofStatus,
    /// The goal as searched: inequalities desugared, both sides normalized.
    pub goal: Equation,
    pub axioms: AxiomSet,
    pub trace: Vec<Step>,
    pub stats: ProofStats,
}

impl ProofOutcome {
    pub fn is_proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }

    pub fn replay(&self) -> Result<()> {
        replay(&self.goal, &self.trace, self.axioms)
    }
}

pub fn prove(eq: &Equation, set: AxiomSet, budget: &Budget) -> Result<ProofOutcome> {
    if budget.max_nodes == 0 {
        return Err(Error::InvalidBudget("max_nodes must be positive".into()));
    }
    let goal = eq.desugar().normalize();
    if goal.contains_join() && !set.has_join() {
        return Err(Error::OutOfFragment(format!("'{eq}' uses '+' but the {set} axioms have no join")));
    }
    let mut out = ProofOutcome {
        status: ProofStatus::Unknown,
        goal: goal.clone(),
        axioms: set,
        trace: Vec::new(),
        stats: ProofStats { nodes: 1, ..Default::default() },
    };
    if goal.lhs == goal.rhs {
        out.status = ProofStatus::Proved;
        return Ok(out);
    }
    let codec = Codec::new(goal.vars())
        .ok_or_else(|| Error::InvalidBudget("too many variables for the proof search".into()))?;
    let rules = compile(set);
    let mut pool: BTreeSet<Term> = goal.lhs.subterms();
    pool.extend(goal.rhs.subterms());
    pool.extend([Term::Zero, Term::Ide]);
    let pool: Vec<Term> = pool.into_iter().collect();
    let rewriter = Rewriter {
        rules: &rules,
        pool: &pool,
        size_cap: goal.lhs.size().max(goal.rhs.size()) + budget.size_slack,
        wide_pool: budget.wide_pool,
    };
    let (meeting, stats) = bidirectional(&goal, &rewriter, &codec, budget);
    out.stats = stats;
    if let Some((left, right)) = meeting {
        out.trace = build_trace(&left, &right, &rewriter);
        out.status = ProofStatus::Proved;
        debug_assert!(replay(&out.goal, &out.trace, set).is_ok());
    }
    Ok(out)
}

/// Proves `a <= b`, i.e. `a & b = a`.
pub fn prove_leq(a: &Term, b: &Term, set: AxiomSet, budget: &Budget) -> Result<ProofOutcome> {
    prove(&Equation::leq(a.clone(), b.clone()), set, budget)
}

/// Applies `steps` one-step rewrites chosen uniformly at random among those
/// leading to terms not yet visited, each an axiom instance of `set`, so the result is derivably equal to `t`.
/// Unbound metavariables are drawn from subterms of `t` and `0`, `1`.
pub fn random_rewrites<R: rand::Rng + ?Sized>(t: &Term, set: AxiomSet, steps: usize, slack: usize, rng: &mut R) -> Term {
    let rules = compile(set);
    let mut pool: BTreeSet<Term> = t.subterms();
    pool.extend([Term::Zero, Term::Ide]);
    let pool: Vec<Term> = pool.into_iter().collect();
    let rewriter = Rewriter { rules: &rules, pool: &pool, size_cap: t.size() + slack, wide_pool: false };
    let mut cur = t.clone();
    let mut seen = BTreeSet::from([cur.clone()]);
    for _ in 0..steps {
        let mut next = Vec::new();
        rewriter.for_each(&cur, |u, _| {
            if !seen.contains(&u) {
                next.push(u);
            }
            true
        });
        if next.is_empty() {
            break;
        }
        cur = next.swap_remove(rng.gen_range(0..next.len()));
        seen.insert(cur.clone());
    }
    cur
}

const NO_PARENT: u32 = u32::MAX;
const CHUNK: usize = 256;

struct Side {
    index: HashMap<Box<[u8]>, u32>,
    nodes: Vec<(Box<[u8]>, u32)>,
    level_start: usize,
    depth: usize,
}

impl Side {
    fn new(root: Box<[u8]>) -> Side {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side { index, nodes: vec![(root, NO_PARENT)], level_start: 0, depth: 0 }
    }

    fn frontier_len(&self) -> usize {
        self.nodes.len() - self.level_start
    }

    fn chain(&self, mut i: u32, codec: &Codec) -> Vec<Term> {
        let mut out = Vec::new();
        while i != NO_PARENT {
            out.push(codec.decode(&self.nodes[i as usize].0));
            i = self.nodes[i as usize].1;
        }
        out.reverse();
        out
    }
}

type Meeting = (Vec<Term>, Vec<Term>);

/// Returns the chains root..meeting for both sides on success.
fn bidirectional(goal: &Equation, rw: &Rewriter, codec: &Codec, budget: &Budget) -> (Option<Meeting>, ProofStats) {
    let mut sides = [Side::new(codec.encode(&goal.lhs)), Side::new(codec.encode(&goal.rhs))];
    let mut stats = ProofStats { nodes: 2, ..Default::default() };
    loop {
        stats.left_depth = sides[0].depth;
        stats.right_depth = sides[1].depth;
        if sides[0].depth + sides[1].depth >= budget.max_depth {
            return (None, stats);
        }
        let (f0, f1) = (sides[0].frontier_len(), sides[1].frontier_len());
        let k = match (f0, f1) {
            (0, 0) => return (None, stats),
            (0, _) => 1,
            (_, 0) => 0,
            _ if f1 < f0 => 1,
            _ => 0,
        };
        let (a, b) = if k == 0 { (0, 1) } else { (1, 0) };
        let level_end = sides[a].nodes.len();
        for chunk_start in (sides[a].level_start..level_end).step_by(CHUNK) {
            let chunk_end = (chunk_start + CHUNK).min(level_end);
            let side = &sides[a];
            let succs: Vec<Vec<Box<[u8]>>> = (chunk_start..chunk_end)
                .into_par_iter()
                .map(|i| {
                    let t = codec.decode(&side.nodes[i].0);
                    let mut v = Vec::new();
                    rw.for_each(&t, |u, _| {
                        v.push(codec.encode(&u));
                        true
                    });
                    v
                })
                .collect();
            for (offset, list) in succs.into_iter().enumerate() {
                let parent = (chunk_start + offset) as u32;
                stats.expanded += 1;
                for enc in list {
                    if sides[a].index.contains_key(&enc) {
                        continue;
                    }
                    let id = sides[a].nodes.len() as u32;
                    sides[a].index.insert(enc.clone(), id);
                    let other = sides[b].index.get(&enc).copied();
                    sides[a].nodes.push((enc, parent));
                    stats.nodes += 1;
                    if let Some(j) = other {
                        sides[a].depth += 1;
                        stats.left_depth = sides[0].depth;
                        stats.right_depth = sides[1].depth;
                        let ca = sides[a].chain(id, codec);
                        let cb = sides[b].chain(j, codec);
                        let meeting = if a == 0 { (ca, cb) } else { (cb, ca) };
                        return (Some(meeting), stats);
                    }
                    if stats.nodes >= budget.max_nodes {
                        return (None, stats);
                    }
                }
            }
        }
        sides[a].level_start = level_end;
        sides[a].depth += 1;
    }
}

fn find_step(from: &Term, to: &Term, rw: &Rewriter, flipped: bool) -> Step {
    let mut found = None;
    rw.for_each(from, |u, r| {
        if u == *to {
            found = Some(r);
            false
        } else {
            true
        }
    });
    let r = found.expect("search edges are reproducible");
    let rule = &rw.rules[r.rule];
    let (a, b) = if flipped { (to.clone(), from.clone()) } else { (from.clone(), to.clone()) };
    Step {
        path: r.path,
        axiom: rule.axiom.to_string(),
        direction: rule.dir,
        substitution: r.subst.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        focus: r.focus,
        flipped,
        from: a,
        to: b,
    }
}

fn build_trace(left: &[Term], right: &[Term], rw: &Rewriter) -> Vec<Step> {
    let mut trace: Vec<Step> = left.windows(2).map(|w| find_step(&w[0], &w[1], rw, false)).collect();
    // `right` runs from the goal's right side to the meeting term.
    let mut back: Vec<Step> = right.windows(2).map(|w| find_step(&w[0], &w[1], rw, true)).collect();
    back.reverse();
    trace.extend(back);
    trace
}

/// Checks a trace step by step: each rewrite must be an instance of a named
/// axiom of `set` and the steps must chain from `goal.lhs` to `goal.rhs`.
pub fn replay(goal: &Equation, trace: &[Step], set: AxiomSet) -> Result<()> {
    let goal = goal.desugar().normalize();
    let axioms = axiom_list(set);
    let mut current = goal.lhs.clone();
    for (i, step) in trace.iter().enumerate() {
        let fail = |msg: &str| Err(Error::Internal(format!("trace step {i} ({}): {msg}", step.axiom)));
        if step.from != current {
            return fail("does not start where the previous step ended");
        }
        let Some(axiom) = axioms.iter().find(|a| a.id == step.axiom) else {
            return fail("axiom not in the system");
        };
        let rules: Vec<Rule> = rules_of(axiom);
        let Some(rule) = rules.iter().find(|r| r.dir == step.direction) else {
            return fail("axiom holds in normal form and cannot be a step");
        };
        let subst = step.substitution.iter().map(|(k, v)| (k.as_str().into(), v.clone())).collect();
        let (src, dst) = if step.flipped { (&step.to, &step.from) } else { (&step.from, &step.to) };
        match rules::apply(rule, src, &step.path, &step.focus, &subst) {
            Some(t) if t == *dst => {}
            _ => return fail("rewrite does not produce the recorded term"),
        }
        current = step.to.clone();
    }
    if current != goal.rhs {
        return Err(Error::Internal("trace does not end at the right-hand side".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, parse_equation};

    fn proves(src: &str, set: AxiomSet, budget: &Budget) -> ProofOutcome {
        let out = prove(&parse_equation(src).unwrap(), set, budget).unwrap();
        if out.is_proved() {
            out.replay().unwrap();
        }
        out
    }

    #[test]
    fn reflexivity_at_depth_zero() {
        let out = proves("x = x", AxiomSet::Base, &Budget::new(0, 1));
        assert!(out.is_proved() && out.trace.is_empty());
        assert!(proves("x & y <= x", AxiomSet::Base, &Budget::new(0, 1)).is_proved());
        assert!(proves("0 <= x", AxiomSet::Base, &Budget::new(0, 1)).is_proved());
    }

    #[test]
    fn axiom_instances_in_one_step() {
        let out = proves("(1 & x);(1 & y) = 1 & x & y", AxiomSet::Base, &Budget::new(1, 1000));
        assert!(out.is_proved());
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].axiom, "subid-product");
        assert!(proves("1 & x;y = 1 & y;x", AxiomSet::Integral, &Budget::new(1, 1000)).is_proved());
        assert!(!proves("1 & x;y = 1 & y;x", AxiomSet::Base, &Budget::new(3, 20_000)).is_proved());
    }

    #[test]
    fn meet_distributes_over_subidentity_prefix() {
        let out = proves("(1 & z);(x & y) = (1 & z);x & (1 & z);y", AxiomSet::Integral, &Budget::new(4, 100_000));
        assert!(out.is_proved());
        assert!(out.trace.len() <= 4);
    }

    #[test]
    fn budgets() {
        let eq = parse_equation("x = y").unwrap();
        assert!(matches!(prove(&eq, AxiomSet::Base, &Budget::new(3, 0)), Err(Error::InvalidBudget(_))));
        let eq = parse_equation("x + y = y + x").unwrap();
        assert!(matches!(prove(&eq, AxiomSet::Base, &Budget::default()), Err(Error::OutOfFragment(_))));
        assert!(prove(&eq, AxiomSet::BaseJoin, &Budget::default()).unwrap().is_proved());
    }

    #[test]
    fn replay_rejects_tampering() {
        let mut out = proves("(1 & x);(1 & y) = 1 & x & y", AxiomSet::Base, &Budget::new(1, 1000));
        out.trace[0].substitution.insert("x".into(), parse("z").unwrap());
        assert!(out.replay().is_err());
        let mut out = proves("(1 & x);(1 & y) = 1 & x & y", AxiomSet::Base, &Budget::new(1, 1000));
        out.trace[0].axiom = "subid-left".into();
        assert!(out.replay().is_err());
    }

    #[test]
    fn trace_json_round_trip() {
        let out = proves("(1 & x);(1 & y) = 1 & x & y", AxiomSet::Base, &Budget::new(1, 1000));
        let s = serde_json::to_string(&out).unwrap();
        let back: ProofOutcome = serde_json::from_str(&s).unwrap();
        assert_eq!(back, out);
        back.replay().unwrap();
    }
}
