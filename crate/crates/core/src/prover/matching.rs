//! Matching of axiom patterns against normal-form terms.
//!
//! Meets and joins match modulo associativity, commutativity and
//! idempotence: each non-variable pattern argument takes a distinct
//! argument of the subject, and a metavariable takes a single argument or,
//! if it is the last unbound one, the meet (join) of everything still
//! uncovered. Once every argument is covered a metavariable may reuse one,
//! which is how `1 & x` matches the bare term `1`.
//!
//! Compositions match modulo associativity: each pattern factor takes a
//! nonempty segment of the subject's factors.
//!
//! At the focus of a rewrite the pattern may also match part of the
//! subject, leaving the other arguments (or a prefix and suffix of factors)
//! as context. Candidates are not guaranteed to be exact; callers check
//! that the instantiated pattern normalizes to the matched part.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::term::Term;

pub type Subst = BTreeMap<Arc<str>, Term>;

/// Which part of the subject term a pattern matched.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Focus {
    Whole,
    /// Argument indices of a meet or join.
    Args(Vec<usize>),
    /// Factor range `start..end` of a composition.
    Segment { start: usize, end: usize },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum AcOp {
    Meet,
    Join,
}

impl AcOp {
    fn view(self, t: &Term) -> &[Term] {
        match self {
            AcOp::Meet => t.meet_view(),
            AcOp::Join => t.join_view(),
        }
    }

    fn build(self, args: Vec<Term>) -> Term {
        match self {
            AcOp::Meet => Term::meet(args),
            AcOp::Join => Term::join(args),
        }
    }
}

/// Matches `p` against the whole of `t`, extending `s`.
pub fn match_full(p: &Term, t: &Term, s: &Subst, out: &mut Vec<Subst>) {
    match p {
        Term::Var(m) => match s.get(m) {
            Some(v) if v == t => out.push(s.clone()),
            Some(_) => {}
            None => {
                let mut s = s.clone();
                s.insert(m.clone(), t.clone());
                out.push(s);
            }
        },
        Term::Zero | Term::Ide => {
            if p == t {
                out.push(s.clone());
            }
        }
        Term::Meet(ps) | Term::Join(ps) => {
            let op = if matches!(p, Term::Meet(_)) { AcOp::Meet } else { AcOp::Join };
            let ts = op.view(t);
            let mut found = Vec::new();
            match_ac(op, ps, ts, s, &mut found);
            out.extend(found.into_iter().filter(|(_, cov)| cov.iter().all(|c| *c)).map(|(s, _)| s));
        }
        Term::Comp(ps) => {
            let ts = t.comp_view();
            let mut found = Vec::new();
            match_seq(ps, 0, ts, 0, s.clone(), &mut found);
            out.extend(found.into_iter().filter(|(_, end)| *end == ts.len()).map(|(s, _)| s));
        }
    }
}

/// Matches `p` at the focus of a rewrite, allowing context around it.
pub fn match_focus(p: &Term, t: &Term) -> Vec<(Subst, Focus)> {
    let empty = Subst::new();
    let mut out = Vec::new();
    match p {
        Term::Meet(ps) | Term::Join(ps) => {
            let op = if matches!(p, Term::Meet(_)) { AcOp::Meet } else { AcOp::Join };
            let ts = op.view(t);
            let mut found = Vec::new();
            match_ac(op, ps, ts, &empty, &mut found);
            for (s, cov) in found {
                let idx: Vec<usize> = (0..ts.len()).filter(|&i| cov[i]).collect();
                let focus = if idx.len() == ts.len() { Focus::Whole } else { Focus::Args(idx) };
                out.push((s, focus));
            }
        }
        Term::Comp(ps) => {
            let ts = t.comp_view();
            for start in 0..ts.len() {
                let mut found = Vec::new();
                match_seq(ps, 0, ts, start, empty.clone(), &mut found);
                for (s, end) in found {
                    let focus = if start == 0 && end == ts.len() { Focus::Whole } else { Focus::Segment { start, end } };
                    out.push((s, focus));
                }
            }
        }
        _ => {
            let mut found = Vec::new();
            match_full(p, t, &empty, &mut found);
            out.extend(found.into_iter().map(|s| (s, Focus::Whole)));
        }
    }
    out
}

/// The part of `t` selected by a focus.
pub fn focused_part(t: &Term, focus: &Focus) -> Option<Term> {
    match focus {
        Focus::Whole => Some(t.clone()),
        Focus::Args(idx) => {
            let (cs, op) = match t {
                Term::Meet(cs) => (cs, AcOp::Meet),
                Term::Join(cs) => (cs, AcOp::Join),
                _ => return None,
            };
            let args: Option<Vec<Term>> = idx.iter().map(|&i| cs.get(i).cloned()).collect();
            Some(op.build(args?))
        }
        Focus::Segment { start, end } => {
            let cs = t.comp_view();
            (start < end && *end <= cs.len()).then(|| Term::comp(cs[*start..*end].iter().cloned()))
        }
    }
}

/// Replaces the focused part of `t` by `new`, keeping the context.
pub fn plug(t: &Term, focus: &Focus, new: Term) -> Option<Term> {
    match focus {
        Focus::Whole => Some(new),
        Focus::Args(idx) => {
            let (cs, op) = match t {
                Term::Meet(cs) => (cs, AcOp::Meet),
                Term::Join(cs) => (cs, AcOp::Join),
                _ => return None,
            };
            if idx.iter().any(|&i| i >= cs.len()) {
                return None;
            }
            let rest = cs.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, c)| c.clone());
            Some(op.build(rest.chain([new]).collect()))
        }
        Focus::Segment { start, end } => {
            let cs = t.comp_view();
            if !(start < end && *end <= cs.len()) {
                return None;
            }
            let parts = cs[..*start].iter().cloned().chain([new]).chain(cs[*end..].iter().cloned());
            Some(Term::comp(parts))
        }
    }
}

fn match_ac(op: AcOp, ps: &[Term], ts: &[Term], s: &Subst, out: &mut Vec<(Subst, Vec<bool>)>) {
    // Non-variable arguments first so they bind metavariables early.
    let mut order: Vec<&Term> = ps.iter().filter(|p| !matches!(p, Term::Var(_))).collect();
    order.extend(ps.iter().filter(|p| matches!(p, Term::Var(_))));
    let mut covered = vec![false; ts.len()];
    ac_rec(op, &order, 0, ts, s.clone(), &mut covered, out);
}

fn ac_rec(
    op: AcOp,
    ps: &[&Term],
    i: usize,
    ts: &[Term],
    s: Subst,
    covered: &mut Vec<bool>,
    out: &mut Vec<(Subst, Vec<bool>)>,
) {
    let Some(p) = ps.get(i) else {
        if covered.iter().any(|c| *c) {
            out.push((s, covered.clone()));
        }
        return;
    };
    match p {
        Term::Var(m) => {
            if let Some(v) = s.get(m) {
                let mut idx = Vec::new();
                for part in op.view(v) {
                    match ts.binary_search(part) {
                        Ok(j) => idx.push(j),
                        Err(_) => return,
                    }
                }
                let saved = covered.clone();
                for j in idx {
                    covered[j] = true;
                }
                ac_rec(op, ps, i + 1, ts, s, covered, out);
                *covered = saved;
                return;
            }
            let uncovered: Vec<usize> = (0..ts.len()).filter(|&j| !covered[j]).collect();
            let last_unbound = ps[i + 1..].iter().all(|q| matches!(q, Term::Var(n) if s.contains_key(n) || n == m));
            let singles: Vec<usize> = if uncovered.is_empty() { (0..ts.len()).collect() } else { uncovered.clone() };
            for j in singles {
                let was = covered[j];
                covered[j] = true;
                let mut s2 = s.clone();
                s2.insert(m.clone(), ts[j].clone());
                ac_rec(op, ps, i + 1, ts, s2, covered, out);
                covered[j] = was;
            }
            if last_unbound && uncovered.len() >= 2 {
                let rest = op.build(uncovered.iter().map(|&j| ts[j].clone()).collect());
                for &j in &uncovered {
                    covered[j] = true;
                }
                let mut s2 = s.clone();
                s2.insert(m.clone(), rest);
                ac_rec(op, ps, i + 1, ts, s2, covered, out);
                for &j in &uncovered {
                    covered[j] = false;
                }
            }
        }
        _ => {
            for j in 0..ts.len() {
                if covered[j] {
                    continue;
                }
                let mut found = Vec::new();
                match_full(p, &ts[j], &s, &mut found);
                if found.is_empty() {
                    continue;
                }
                covered[j] = true;
                for s2 in found {
                    ac_rec(op, ps, i + 1, ts, s2, covered, out);
                }
                covered[j] = false;
            }
        }
    }
}

/// Matches pattern factors `ps[i..]` starting at factor `k`; reports the
/// substitution and the end of the matched range.
fn match_seq(ps: &[Term], i: usize, ts: &[Term], k: usize, s: Subst, out: &mut Vec<(Subst, usize)>) {
    let Some(p) = ps.get(i) else {
        out.push((s, k));
        return;
    };
    match p {
        Term::Var(m) => {
            if let Some(v) = s.get(m) {
                let parts = v.comp_view();
                if ts.len() >= k + parts.len() && &ts[k..k + parts.len()] == parts {
                    let end = k + parts.len();
                    match_seq(ps, i + 1, ts, end, s, out);
                }
                return;
            }
            for end in k + 1..=ts.len() {
                let mut s2 = s.clone();
                s2.insert(m.clone(), Term::comp(ts[k..end].iter().cloned()));
                match_seq(ps, i + 1, ts, end, s2, out);
            }
        }
        _ => {
            if k < ts.len() {
                let mut found = Vec::new();
                match_full(p, &ts[k], &s, &mut found);
                for s2 in found {
                    match_seq(ps, i + 1, ts, k + 1, s2, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn inst(p: &Term, s: &Subst) -> Term {
        p.substitute(&|v| s.get(v).cloned())
    }

    #[test]
    fn ac_match_binds_in_any_order() {
        let p = parse("1 & x & y").unwrap();
        let t = parse("1 & a & b").unwrap();
        let ms = match_focus(&p, &t);
        let exact: Vec<_> = ms.iter().filter(|(s, f)| *f == Focus::Whole && inst(&p, s) == t).collect();
        assert!(exact.len() >= 2);
    }

    #[test]
    fn overlap_lets_subidentity_pattern_match_one() {
        let p = parse("1 & x").unwrap();
        let ms = match_focus(&p, &Term::Ide);
        assert!(ms.iter().any(|(s, _)| inst(&p, s) == Term::Ide));
    }

    #[test]
    fn partial_meet_match_keeps_context() {
        let p = parse("(1 & x);y & z").unwrap();
        let t = parse("(1 & a);b & c & d").unwrap();
        let ms = match_focus(&p, &t);
        assert!(ms.iter().any(|(s, f)| matches!(f, Focus::Args(_)) && focused_part(&t, f) == Some(inst(&p, s))));
        assert!(ms.iter().any(|(s, f)| *f == Focus::Whole && inst(&p, s) == t));
    }

    #[test]
    fn segment_match_in_composition() {
        let p = parse("(1 & x);(1 & y)").unwrap();
        let t = parse("a;(1 & b);(1 & c);d").unwrap();
        let ms = match_focus(&p, &t);
        assert_eq!(ms.len(), 1);
        let (s, f) = &ms[0];
        assert_eq!(*f, Focus::Segment { start: 1, end: 3 });
        assert_eq!(s.get("x").unwrap(), &parse("b").unwrap());
        let new = plug(&t, f, parse("1 & b & c").unwrap()).unwrap();
        assert_eq!(new, parse("a;(1 & b & c);d").unwrap());
    }

    #[test]
    fn variables_take_segments() {
        let p = parse("x;y").unwrap();
        let t = parse("a;b;c").unwrap();
        let mut out = Vec::new();
        match_full(&p, &t, &Subst::new(), &mut out);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn bound_variables_must_agree() {
        let p = parse("x & y;(1 & z)").unwrap();
        let t = parse("a;(1 & b) & a").unwrap();
        let mut out = Vec::new();
        match_full(&p, &t, &Subst::new(), &mut out);
        assert!(out.iter().any(|s| inst(&p, s) == t));
    }
}
