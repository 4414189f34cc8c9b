use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::Term;

/// A word over single-character symbols; the empty string is the empty word.
pub type Word = String;

/// A valuation of variables as finite languages over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LangModel {
    alphabet: Vec<char>,
    vars: BTreeMap<Arc<str>, BTreeSet<Word>>,
}

impl LangModel {
    pub fn new(alphabet: Vec<char>) -> Result<Self> {
        let mut a = alphabet;
        a.sort_unstable();
        a.dedup();
        if a.is_empty() {
            return Err(Error::InvalidModel("empty alphabet".into()));
        }
        Ok(LangModel { alphabet: a, vars: BTreeMap::new() })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn set<I, W>(&mut self, var: &str, words: I) -> Result<()>
    where
        I: IntoIterator<Item = W>,
        W: Into<Word>,
    {
        let words: BTreeSet<Word> = words.into_iter().map(Into::into).collect();
        if let Some(bad) = words.iter().find(|w| w.chars().any(|c| !self.alphabet.contains(&c))) {
            return Err(Error::InvalidModel(format!("word '{bad}' uses symbols outside the alphabet")));
        }
        self.vars.insert(Arc::from(var), words);
        Ok(())
    }

    pub fn with<I, W>(mut self, var: &str, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: Into<Word>,
    {
        self.set(var, words)?;
        Ok(self)
    }

    pub fn get(&self, var: &str) -> Option<&BTreeSet<Word>> {
        self.vars.get(var)
    }

    pub fn eval(&self, t: &Term) -> Result<BTreeSet<Word>> {
        eval_lang(t, self)
    }
}

/// Evaluates a term: `;` is concatenation, `1` the language `{""}`.
pub fn eval_lang(t: &Term, m: &LangModel) -> Result<BTreeSet<Word>> {
    Ok(match t {
        Term::Zero => BTreeSet::new(),
        Term::Ide => BTreeSet::from([Word::new()]),
        Term::Var(v) => m.vars.get(v.as_ref()).cloned().ok_or_else(|| Error::UnboundVariable(v.to_string()))?,
        Term::Meet(cs) => {
            let mut acc = eval_lang(&cs[0], m)?;
            for c in &cs[1..] {
                if acc.is_empty() {
                    break;
                }
                let next = eval_lang(c, m)?;
                acc.retain(|w| next.contains(w));
            }
            acc
        }
        Term::Join(cs) => {
            let mut acc = BTreeSet::new();
            for c in cs {
                acc.extend(eval_lang(c, m)?);
            }
            acc
        }
        Term::Comp(cs) => {
            let mut acc = eval_lang(&cs[0], m)?;
            for c in &cs[1..] {
                let next = eval_lang(c, m)?;
                acc = acc
                    .iter()
                    .flat_map(|s| next.iter().map(move |t| format!("{s}{t}")))
                    .collect();
            }
            acc
        }
    })
}

/// Wire shape: `{"alphabet": ["a", "b"], "vars": {"x": ["a", "ab"]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LangModelJson {
    pub alphabet: Vec<String>,
    pub vars: BTreeMap<String, Vec<String>>,
}

impl Serialize for LangModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LangModelJson {
            alphabet: self.alphabet.iter().map(|c| c.to_string()).collect(),
            vars: self
                .vars
                .iter()
                .map(|(k, ws)| (k.to_string(), ws.iter().cloned().collect()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LangModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LangModelJson::deserialize(d)?;
        let mut alphabet = Vec::new();
        for sym in &j.alphabet {
            let mut cs = sym.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => return Err(D::Error::custom(format!("symbol '{sym}' is not a single character"))),
            }
        }
        let mut m = LangModel::new(alphabet).map_err(D::Error::custom)?;
        for (k, ws) in j.vars {
            m.set(&k, ws).map_err(D::Error::custom)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn eval_examples() {
        let m = LangModel::new(vec!['a', 'b'])
            .unwrap()
            .with("x", ["a"])
            .unwrap()
            .with("y", ["b"])
            .unwrap();
        assert_eq!(m.eval(&Term::Ide).unwrap(), BTreeSet::from([String::new()]));
        assert_eq!(m.eval(&parse("x;y").unwrap()).unwrap(), BTreeSet::from(["ab".to_string()]));
        assert!(m.eval(&parse("x & 1").unwrap()).unwrap().is_empty());
        assert!(m.eval(&parse("w").unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = LangModel::new(vec!['b', 'a']).unwrap().with("x", ["a", "ab", ""]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"alphabet":["a","b"],"vars":{"x":["","a","ab"]}}"#);
        let back: LangModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(LangModel::new(vec!['a']).unwrap().with("x", ["c"]).is_err());
    }
}
