//! Finite relation and language models: evaluation, generated subalgebras,
//! integrality, and counterexample search.

mod closure;
mod families;
mod lang;
mod relation;
mod report;
mod search;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::Term;

pub use closure::{generated_closure, generated_closure_join_free, is_commutative_model, is_integral_model, Closure, Integrality, DEFAULT_CLOSURE_CAP};
pub use families::{cayley_model, Group};
pub use lang::{eval_lang, LangModel, Word};
pub use relation::{Relation, MAX_BASE};
pub use report::{CounterexampleReport, Model, Witness};
pub use search::{
    search_lang_counterexample, search_rel_counterexample, BaseCoverage, LangSearchBounds,
    RelMode, RelSearchBounds, SearchOutcome, SearchStats,
};

/// A valuation of variables as relations on `{0..base-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelModel {
    base: usize,
    vars: BTreeMap<Arc<str>, Relation>,
}

impl RelModel {
    pub fn new(base: usize) -> Result<Self> {
        if !(1..=MAX_BASE).contains(&base) {
            return Err(Error::InvalidModel(format!("base {base} not in 1..={MAX_BASE}")));
        }
        Ok(RelModel { base, vars: BTreeMap::new() })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn set(&mut self, var: &str, rel: Relation) -> Result<()> {
        if rel.base() != self.base {
            return Err(Error::InvalidModel(format!(
                "relation for '{var}' has base {} but model has base {}",
                rel.base(),
                self.base
            )));
        }
        self.vars.insert(Arc::from(var), rel);
        Ok(())
    }

    pub fn with(mut self, var: &str, pairs: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(u, v)) = pairs.iter().find(|(u, v)| *u >= self.base || *v >= self.base) {
            return Err(Error::InvalidModel(format!("pair ({u},{v}) outside base {}", self.base)));
        }
        let rel = Relation::from_pairs(self.base, pairs.iter().copied());
        self.set(var, rel)?;
        Ok(self)
    }

    pub fn get(&self, var: &str) -> Option<&Relation> {
        self.vars.get(var)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&Arc<str>, &Relation)> {
        self.vars.iter()
    }

    /// Binds every listed variable that is still unbound to the empty relation.
    pub fn bind_missing_empty<'a, I: IntoIterator<Item = &'a Arc<str>>>(&mut self, names: I) {
        for n in names {
            self.vars.entry(n.clone()).or_insert_with(|| Relation::empty(self.base));
        }
    }

    pub fn eval(&self, t: &Term) -> Result<Relation> {
        eval_rel(t, self)
    }

    pub fn to_json(&self) -> RelModelJson {
        RelModelJson {
            base: self.base,
            vars: self
                .vars
                .iter()
                .map(|(k, r)| (k.to_string(), r.pairs().map(|(u, v)| [u, v]).collect()))
                .collect(),
        }
    }

    pub fn from_json(j: &RelModelJson) -> Result<Self> {
        let mut m = RelModel::new(j.base)?;
        for (name, pairs) in &j.vars {
            let pairs: Vec<(usize, usize)> = pairs.iter().map(|p| (p[0], p[1])).collect();
            m = m.with(name, &pairs)?;
        }
        Ok(m)
    }
}

/// Wire shape: `{"base": n, "vars": {"x": [[u, v], ...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelModelJson {
    pub base: usize,
    pub vars: BTreeMap<String, Vec<[usize; 2]>>,
}

impl Serialize for RelModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RelModelJson::deserialize(d)?;
        RelModel::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Evaluates a term: `+` is union, `&` intersection, `;` composition,
/// `0` the empty relation and `1` the identity on the base.
pub fn eval_rel(t: &Term, m: &RelModel) -> Result<Relation> {
    eval_rel_with(t, m.base, &|v| m.vars.get(v))
}

pub(crate) fn eval_rel_with<'a>(
    t: &Term,
    base: usize,
    lookup: &dyn Fn(&str) -> Option<&'a Relation>,
) -> Result<Relation> {
    Ok(match t {
        Term::Zero => Relation::empty(base),
        Term::Ide => Relation::identity(base),
        Term::Var(v) => lookup(v).cloned().ok_or_else(|| Error::UnboundVariable(v.to_string()))?,
        Term::Meet(cs) => fold(cs, base, lookup, Relation::intersection)?,
        Term::Join(cs) => fold(cs, base, lookup, Relation::union)?,
        Term::Comp(cs) => fold(cs, base, lookup, Relation::compose)?,
    })
}

fn fold<'a>(
    cs: &[Term],
    base: usize,
    lookup: &dyn Fn(&str) -> Option<&'a Relation>,
    op: fn(&Relation, &Relation) -> Relation,
) -> Result<Relation> {
    let mut it = cs.iter();
    let first = it.next().ok_or_else(|| Error::Internal("operation without arguments".into()))?;
    let mut acc = eval_rel_with(first, base, lookup)?;
    for c in it {
        acc = op(&acc, &eval_rel_with(c, base, lookup)?);
    }
    Ok(acc)
}
