//! Terms over the signature `(+, &, ;, 0, 1)`: join, meet, composition,
//! the empty element and the identity.
//!
//! Every [`Term`] produced by this module is kept in normal form: meets and
//! joins are flattened, sorted and deduplicated, compositions are flattened
//! with identity factors dropped, and `0` absorbs everything above it except
//! a join, where it is dropped as the bottom element.

mod decompose;
mod generate;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use decompose::{is_subidentity_syntactic, join_free_decompose};
pub use generate::{enumerate_terms, random_term, Signature};
pub use parse::{parse, parse_equation, ParseError};

/// A term in normal form.
///
/// The derived ordering compares the variant first (in declaration order)
/// and then the payload lexicographically; it is the total order used for
/// the canonical sorting of meet and join arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    Ide,
    Var(Arc<str>),
    Meet(Vec<Term>),
    Join(Vec<Term>),
    Comp(Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    /// Meet of already-normal arguments.
    pub fn meet<I: IntoIterator<Item = Term>>(args: I) -> Term {
        let mut out = Vec::new();
        for a in args {
            match a {
                Term::Zero => return Term::Zero,
                Term::Meet(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Term::Ide,
            1 => out.pop().unwrap(),
            _ => Term::Meet(out),
        }
    }

    /// Join of already-normal arguments. An empty join is `0`.
    pub fn join<I: IntoIterator<Item = Term>>(args: I) -> Term {
        let mut out = Vec::new();
        for a in args {
            match a {
                Term::Zero => {}
                Term::Join(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Term::Zero,
            1 => out.pop().unwrap(),
            _ => Term::Join(out),
        }
    }

    /// Composition of already-normal arguments. An empty composition is `1`.
    pub fn comp<I: IntoIterator<Item = Term>>(args: I) -> Term {
        let mut out = Vec::new();
        for a in args {
            match a {
                Term::Zero => return Term::Zero,
                Term::Ide => {}
                Term::Comp(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Term::Ide,
            1 => out.pop().unwrap(),
            _ => Term::Comp(out),
        }
    }

    pub fn meet2(a: Term, b: Term) -> Term {
        Term::meet([a, b])
    }

    pub fn join2(a: Term, b: Term) -> Term {
        Term::join([a, b])
    }

    pub fn comp2(a: Term, b: Term) -> Term {
        Term::comp([a, b])
    }

    /// Rebuilds the term bottom-up through the smart constructors.
    ///
    /// Idempotent, and a no-op on anything this crate constructs; useful for
    /// terms assembled directly from the enum variants.
    pub fn normalize(&self) -> Term {
        match self {
            Term::Zero | Term::Ide | Term::Var(_) => self.clone(),
            Term::Meet(cs) => Term::meet(cs.iter().map(Term::normalize)),
            Term::Join(cs) => Term::join(cs.iter().map(Term::normalize)),
            Term::Comp(cs) => Term::comp(cs.iter().map(Term::normalize)),
        }
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::Meet(cs) | Term::Join(cs) | Term::Comp(cs) => cs,
            _ => &[],
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Zero)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    /// Number of binary operation nodes the flattened tree stands for.
    pub fn op_count(&self) -> usize {
        let cs = self.children();
        let own = cs.len().saturating_sub(1);
        own + cs.iter().map(Term::op_count).sum::<usize>()
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn contains_join(&self) -> bool {
        matches!(self, Term::Join(_)) || self.children().iter().any(Term::contains_join)
    }

    pub fn contains_zero(&self) -> bool {
        matches!(self, Term::Zero) || self.children().iter().any(Term::contains_zero)
    }

    /// All distinct subterms, including the term itself.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        if out.insert(self.clone()) {
            self.children().iter().for_each(|c| c.collect_subterms(out));
        }
    }

    /// Subterm at a child-index path, if the path is valid.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at(rest),
        }
    }

    /// Replaces the subterm at `path` and renormalizes the spine.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let cs = self.children();
        let child = cs.get(i)?.replace_at(rest, new)?;
        let mut cs = cs.to_vec();
        cs[i] = child;
        Some(match self {
            Term::Meet(_) => Term::meet(cs),
            Term::Join(_) => Term::join(cs),
            Term::Comp(_) => Term::comp(cs),
            _ => unreachable!("leaf has no children"),
        })
    }

    /// Arguments of a meet, or the term itself as a one-element meet.
    pub fn meet_view(&self) -> &[Term] {
        match self {
            Term::Meet(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn join_view(&self) -> &[Term] {
        match self {
            Term::Join(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }

    /// Factors of a composition; `1` is the empty composition.
    pub fn comp_view(&self) -> &[Term] {
        match self {
            Term::Comp(cs) => cs,
            Term::Ide => &[],
            other => std::slice::from_ref(other),
        }
    }

    /// Applies a variable renaming/substitution. Unmapped variables stay.
    pub fn substitute<F: Fn(&str) -> Option<Term>>(&self, f: &F) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Zero | Term::Ide => self.clone(),
            Term::Meet(cs) => Term::meet(cs.iter().map(|c| c.substitute(f))),
            Term::Join(cs) => Term::join(cs.iter().map(|c| c.substitute(f))),
            Term::Comp(cs) => Term::comp(cs.iter().map(|c| c.substitute(f))),
        }
    }
}

fn fmt_child(t: &Term, parent_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match t {
        Term::Join(_) => 0,
        Term::Meet(_) => 1,
        Term::Comp(_) => 2,
        _ => 3,
    };
    if prec <= parent_prec {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sep, prec) = match self {
            Term::Zero => return f.write_str("0"),
            Term::Ide => return f.write_str("1"),
            Term::Var(v) => return f.write_str(v),
            Term::Join(_) => (" + ", 0),
            Term::Meet(_) => (" & ", 1),
            Term::Comp(_) => (";", 2),
        };
        for (i, c) in self.children().iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            fmt_child(c, prec, f)?;
        }
        Ok(())
    }
}

/// Renders a term in the input grammar.
pub fn render(t: &Term) -> String {
    t.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    Eq,
    Leq,
}

/// `lhs = rhs` or `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub kind: EquationKind,
}

impl Equation {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Equation { lhs: lhs.normalize(), rhs: rhs.normalize(), kind: EquationKind::Eq }
    }

    pub fn leq(lhs: Term, rhs: Term) -> Self {
        Equation { lhs: lhs.normalize(), rhs: rhs.normalize(), kind: EquationKind::Leq }
    }

    /// `a <= b` becomes `a & b = a`; equations are returned unchanged.
    pub fn desugar(&self) -> Equation {
        match self.kind {
            EquationKind::Eq => self.clone(),
            EquationKind::Leq => Equation {
                lhs: Term::meet2(self.lhs.clone(), self.rhs.clone()),
                rhs: self.lhs.clone(),
                kind: EquationKind::Eq,
            },
        }
    }

    pub fn normalize(&self) -> Equation {
        Equation { lhs: self.lhs.normalize(), rhs: self.rhs.normalize(), kind: self.kind }
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn contains_join(&self) -> bool {
        self.lhs.contains_join() || self.rhs.contains_join()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            EquationKind::Eq => "=",
            EquationKind::Leq => "<=",
        };
        write!(f, "{} {} {}", self.lhs, op, self.rhs)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl<'de> serde::Deserialize<'de> for Equation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_equation(&text).map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for Equation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
