//! Axioms compiled to oriented rewrite rules, and one-step rewriting.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matching::{focused_part, match_focus, plug, Focus, Subst};
use crate::axioms::{axiom_list, Axiom, AxiomSet};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Left side of the axiom rewritten to the right side.
    Forward,
    Backward,
}

#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub axiom: &'static str,
    pub dir: Direction,
    pub pattern: Term,
    pub result: Term,
    /// Metavariables of `result` that the pattern does not bind.
    pub free: Vec<Arc<str>>,
}

impl Rule {
    fn new(axiom: &'static str, dir: Direction, pattern: Term, result: Term) -> Rule {
        let bound = pattern.vars();
        let free = result.vars().into_iter().filter(|v| !bound.contains(v)).collect();
        Rule { axiom, dir, pattern, result, free }
    }
}

/// Both orientations of an axiom, or nothing if it holds in normal form.
pub(crate) fn rules_of(axiom: &Axiom) -> Vec<Rule> {
    let eq = axiom.equation.desugar().normalize();
    if eq.lhs == eq.rhs {
        return Vec::new();
    }
    vec![
        Rule::new(axiom.id, Direction::Forward, eq.lhs.clone(), eq.rhs.clone()),
        Rule::new(axiom.id, Direction::Backward, eq.rhs, eq.lhs),
    ]
}

pub(crate) fn compile(set: AxiomSet) -> Vec<Rule> {
    axiom_list(set).iter().flat_map(rules_of).collect()
}

/// A located rule application.
#[derive(Clone, Debug)]
pub(crate) struct Rewrite {
    pub rule: usize,
    pub path: Vec<usize>,
    pub focus: Focus,
    pub subst: Subst,
}

fn instantiate(t: &Term, s: &Subst) -> Term {
    t.substitute(&|v| s.get(v).cloned())
}

/// Applies `rule` under `subst` at `path` of `root`; `None` when the
/// instantiated pattern is not exactly the focused part.
pub(crate) fn apply(rule: &Rule, root: &Term, path: &[usize], focus: &Focus, subst: &Subst) -> Option<Term> {
    let sub = root.at(path)?;
    let part = focused_part(sub, focus)?;
    if instantiate(&rule.pattern, subst) != part {
        return None;
    }
    let plugged = plug(sub, focus, instantiate(&rule.result, subst))?;
    root.replace_at(path, plugged)
}

fn positions<'a>(t: &'a Term, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Term)>) {
    out.push((path.clone(), t));
    for (i, c) in t.children().iter().enumerate() {
        path.push(i);
        positions(c, path, out);
        path.pop();
    }
}

pub(crate) struct Rewriter<'a> {
    pub rules: &'a [Rule],
    /// Instances for metavariables only the produced side mentions.
    pub pool: &'a [Term],
    pub size_cap: usize,
    /// Also draw free metavariables from subterms of the rewritten term.
    pub wide_pool: bool,
}

impl Rewriter<'_> {
    /// Calls `f` on every distinct-from-`t` one-step rewrite within the
    /// size cap, in a fixed order: positions in preorder, then rules, then
    /// matches.
    pub fn for_each(&self, t: &Term, mut f: impl FnMut(Term, Rewrite) -> bool) {
        let mut pos = Vec::new();
        positions(t, &mut Vec::new(), &mut pos);
        let local_pool: Vec<Term> = if self.wide_pool {
            let mut p: BTreeSet<Term> = self.pool.iter().cloned().collect();
            p.extend(t.subterms());
            p.into_iter().collect()
        } else {
            Vec::new()
        };
        let pool = if self.wide_pool { &local_pool[..] } else { self.pool };
        for (path, sub) in &pos {
            for (ri, rule) in self.rules.iter().enumerate() {
                for (subst, focus) in match_focus(&rule.pattern, sub) {
                    let mut substs = vec![subst];
                    for v in &rule.free {
                        substs = substs
                            .into_iter()
                            .flat_map(|s| {
                                pool.iter().map(move |p| {
                                    let mut s = s.clone();
                                    s.insert(v.clone(), p.clone());
                                    s
                                })
                            })
                            .collect();
                    }
                    for subst in substs {
                        let Some(u) = apply(rule, t, path, &focus, &subst) else { continue };
                        if u == *t || u.size() > self.size_cap {
                            continue;
                        }
                        let rw = Rewrite { rule: ri, path: path.clone(), focus: focus.clone(), subst };
                        if !f(u, rw) {
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// Compact byte encoding of normal-form terms for the search tables.
pub(crate) struct Codec {
    vars: Vec<Arc<str>>,
}

impl Codec {
    pub fn new(vars: BTreeSet<Arc<str>>) -> Option<Codec> {
        (vars.len() <= 256).then(|| Codec { vars: vars.into_iter().collect() })
    }

    pub fn encode(&self, t: &Term) -> Box<[u8]> {
        let mut out = Vec::with_capacity(t.size() * 2);
        self.enc(t, &mut out);
        out.into_boxed_slice()
    }

    fn enc(&self, t: &Term, out: &mut Vec<u8>) {
        let (tag, cs) = match t {
            Term::Zero => return out.push(0),
            Term::Ide => return out.push(1),
            Term::Var(v) => {
                let i = self.vars.binary_search(v).expect("variable of the goal");
                out.extend([2, i as u8]);
                return;
            }
            Term::Meet(cs) => (3, cs),
            Term::Join(cs) => (4, cs),
            Term::Comp(cs) => (5, cs),
        };
        // Arity above 255 cannot arise within the size caps used.
        out.extend([tag, cs.len().min(255) as u8]);
        for c in cs {
            self.enc(c, out);
        }
    }

    pub fn decode(&self, bytes: &[u8]) -> Term {
        let mut pos = 0;
        self.dec(bytes, &mut pos)
    }

    fn dec(&self, b: &[u8], pos: &mut usize) -> Term {
        let tag = b[*pos];
        *pos += 1;
        match tag {
            0 => Term::Zero,
            1 => Term::Ide,
            2 => {
                let i = b[*pos] as usize;
                *pos += 1;
                Term::Var(self.vars[i].clone())
            }
            _ => {
                let n = b[*pos] as usize;
                *pos += 1;
                let cs: Vec<Term> = (0..n).map(|_| self.dec(b, pos)).collect();
                match tag {
                    3 => Term::Meet(cs),
                    4 => Term::Join(cs),
                    _ => Term::Comp(cs),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn inert_axioms_compile_to_nothing() {
        let rules = compile(AxiomSet::Base);
        assert!(rules.iter().all(|r| r.axiom != "meet-commutative" && r.axiom != "zero-meet"));
        assert!(rules.iter().any(|r| r.axiom == "monotonicity"));
        let join = compile(AxiomSet::BaseJoin);
        let absorb = join.iter().find(|r| r.axiom == "absorb-meet-join" && r.dir == Direction::Backward).unwrap();
        assert_eq!(absorb.free.len(), 1);
    }

    #[test]
    fn one_step_rewrites_include_the_axiom_instance() {
        let rules = compile(AxiomSet::Base);
        let pool = [Term::Zero, Term::Ide];
        let rw = Rewriter { rules: &rules, pool: &pool, size_cap: 20, wide_pool: false };
        let t = parse("(1 & a);(1 & b)").unwrap();
        let mut outs = Vec::new();
        rw.for_each(&t, |u, _| {
            outs.push(u);
            true
        });
        assert!(outs.contains(&parse("1 & a & b").unwrap()));
    }

    #[test]
    fn codec_round_trip() {
        let t = parse("(1 & a);(b + c);a & d").unwrap();
        let codec = Codec::new(t.vars()).unwrap();
        assert_eq!(codec.decode(&codec.encode(&t)), t);
    }
}
