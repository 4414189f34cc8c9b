//! The conditions every graph of the sequence must meet, checked on a
//! finite prefix. Checks that need a proof report `Unknown` when the budget
//! runs out instead of guessing.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::filter::nonzero_certificate;
use super::{FilterDescriptor, Membership, SatGraph};
use crate::model::{RelModel, Relation};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated { witness: String },
    Unknown { reason: String },
}

impl Status {
    pub fn is_violated(&self) -> bool {
        matches!(self, Status::Violated { .. })
    }
}

/// Folds per-item results: any violation wins, then any unknown.
#[derive(Default)]
struct Acc {
    violated: Option<String>,
    unknown: Option<String>,
}

impl Acc {
    fn violate(&mut self, w: String) {
        self.violated.get_or_insert(w);
    }

    fn unknown(&mut self, r: String) {
        self.unknown.get_or_insert(r);
    }

    fn finish(self) -> Status {
        match (self.violated, self.unknown) {
            (Some(witness), _) => Status::Violated { witness },
            (None, Some(reason)) => Status::Unknown { reason },
            (None, None) => Status::Holds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub step: usize,
    pub nodes: usize,
    pub edges: usize,
    /// Reflexive and transitive edge relation.
    pub rt: Status,
    /// Edges are the transitive closure of the witness edges.
    pub gen: Status,
    /// Every label is a proper fundamental filter.
    pub fun: Status,
    /// Diagonals carry the subidentity filter, which bounds the subidentity
    /// filter of every label element.
    pub dr: Status,
    /// Labels compose along paths.
    pub comp: Status,
    /// No witness edge between distinct nodes contains the identity.
    pub ide: Status,
    /// Queued compositions not yet split.
    pub sat_pending: usize,
}

impl InvariantReport {
    pub fn conditions(&self) -> [(&'static str, &Status); 6] {
        [("rt", &self.rt), ("gen", &self.gen), ("fun", &self.fun), ("dr", &self.dr), ("comp", &self.comp), ("ide", &self.ide)]
    }

    pub fn violations(&self) -> Vec<&'static str> {
        self.conditions().iter().filter(|(_, s)| s.is_violated()).map(|(n, _)| *n).collect()
    }
}

fn check_rt(g: &SatGraph) -> Status {
    let mut acc = Acc::default();
    for n in 0..g.nodes {
        if !g.has_edge(n, n) {
            acc.violate(format!("no loop at {n}"));
        }
    }
    for &(a, b) in g.labels.keys() {
        for &(b2, c) in g.labels.range((b, 0)..(b + 1, 0)).map(|(k, _)| k) {
            debug_assert_eq!(b, b2);
            if !g.has_edge(a, c) {
                acc.violate(format!("({a},{b}) and ({b},{c}) but no ({a},{c})"));
            }
        }
    }
    acc.finish()
}

fn check_gen(g: &SatGraph) -> Status {
    let n = g.nodes;
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in &g.witnesses {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut acc = Acc::default();
    for i in 0..n {
        for j in 0..n {
            if reach[i][j] != g.has_edge(i, j) {
                acc.violate(format!("({i},{j}): edge {} but generated {}", g.has_edge(i, j), reach[i][j]));
            }
        }
    }
    acc.finish()
}

fn check_fun(g: &SatGraph) -> Status {
    let mut acc = Acc::default();
    for (&(a, b), l) in &g.labels {
        let bottom = g.oracle.bottom(l).normalize();
        if l.cores.is_empty() || bottom.is_zero() {
            acc.violate(format!("({a},{b}) is the improper filter"));
        } else if !nonzero_certificate(&bottom) {
            acc.unknown(format!("({a},{b}): no properness certificate"));
        }
    }
    acc.finish()
}

fn check_dr(g: &SatGraph) -> Status {
    let mut acc = Acc::default();
    for n in 0..g.nodes {
        if g.label(n, n).is_some_and(|l| !l.is_e()) {
            acc.violate(format!("label of ({n},{n}) is not the subidentity filter"));
        }
    }
    let cores: BTreeSet<&Term> =
        g.labels.iter().filter(|((a, b), _)| a != b).flat_map(|(_, l)| l.cores.iter()).collect();
    let e = FilterDescriptor::e();
    let extra: Vec<&Term> = g.basis.pool.iter().filter(|p| !g.basis.generators.contains(p)).collect();
    let found: Vec<String> = cores
        .par_iter()
        .flat_map_iter(|s| extra.iter().map(move |p| (*s, *p)))
        .filter(|(s, p)| g.oracle.fixes(p, s) && !g.oracle.member(p, &e).is_member())
        .map(|(s, p)| format!("{p} fixes {s} but is not known to be in the subidentity filter"))
        .collect();
    if let Some(r) = found.into_iter().next() {
        acc.unknown(r);
    }
    acc.finish()
}

fn check_comp(g: &SatGraph) -> Status {
    let triples: Vec<(usize, usize, usize)> = g
        .labels
        .keys()
        .filter(|(a, b)| a != b)
        .flat_map(|&(a, b)| {
            g.labels.range((b, 0)..(b + 1, 0)).map(move |(&(_, c), _)| (a, b, c)).filter(|&(_, b, c)| b != c)
        })
        .collect();
    let results: Vec<(usize, usize, usize, Membership, bool)> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let gh = Term::comp2(g.labels[&(a, b)].core_meet(), g.labels[&(b, c)].core_meet());
            match g.label(a, c) {
                Some(l) => (a, b, c, g.oracle.member(&gh, l), true),
                None => (a, b, c, Membership::NotMember, false),
            }
        })
        .collect();
    let mut acc = Acc::default();
    for (a, b, c, m, edge) in results {
        match (edge, m) {
            (false, _) => acc.violate(format!("({a},{b}),({b},{c}) without ({a},{c})")),
            (true, Membership::Member) => {}
            (true, Membership::NotMember) => acc.violate(format!("labels of ({a},{b}),({b},{c}) escape ({a},{c})")),
            (true, Membership::Unknown) => acc.unknown(format!("({a},{b}),({b},{c}) into ({a},{c}) not proved")),
        }
    }
    acc.finish()
}

/// The two-point model with every variable full is integral; a filter
/// whose least element is full there does not contain `1`.
fn identity_free_certificate(bottom: &Term) -> bool {
    let mut m = RelModel::new(2).expect("base 2");
    for v in bottom.vars() {
        m.set(&v, Relation::full(2)).expect("same base");
    }
    m.eval(bottom).map(|r| r == Relation::full(2)).unwrap_or(false)
}

fn check_ide(g: &SatGraph) -> Status {
    let mut acc = Acc::default();
    for &(a, b) in g.witnesses.iter().filter(|(a, b)| a != b) {
        let l = &g.labels[&(a, b)];
        match g.oracle.member(&Term::Ide, l) {
            Membership::Member => acc.violate(format!("1 is in the label of witness edge ({a},{b})")),
            Membership::NotMember => {}
            Membership::Unknown if identity_free_certificate(&g.oracle.bottom(l)) => {}
            Membership::Unknown => acc.unknown(format!("({a},{b}): 1 not excluded")),
        }
    }
    acc.finish()
}

pub fn check_invariants(g: &SatGraph) -> InvariantReport {
    InvariantReport {
        step: g.steps,
        nodes: g.nodes,
        edges: g.edge_count(),
        rt: check_rt(g),
        gen: check_gen(g),
        fun: check_fun(g),
        dr: check_dr(g),
        comp: check_comp(g),
        ide: check_ide(g),
        sat_pending: g.pending(),
    }
}
