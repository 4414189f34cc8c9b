use serde::Serialize;

use super::{eval_lang, eval_rel, is_commutative_model, is_integral_model, LangModel, RelModel, Word, DEFAULT_CLOSURE_CAP};
use crate::error::{Error, Result};
use crate::term::{Equation, EquationKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Model {
    Rel(RelModel),
    Lang(LangModel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Pair([usize; 2]),
    Word(Word),
}

/// A model together with an element that separates the two sides of an
/// equation. Construction re-evaluates both sides, so an existing report
/// always re-verifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub equation: Equation,
    pub model: Model,
    pub witness: Witness,
    /// Whether the witness lies in the left-hand side (else in the right).
    pub in_lhs: bool,
    pub integral: bool,
    pub commutative: bool,
}

impl CounterexampleReport {
    /// Builds a report for a relation model, picking the first separating
    /// pair in row-major order. Fails if the model does not separate.
    pub fn for_rel(eq: &Equation, model: RelModel, integral: bool, commutative: bool) -> Result<Self> {
        let lhs = eval_rel(&eq.lhs, &model)?;
        let rhs = eval_rel(&eq.rhs, &model)?;
        let diff = match eq.kind {
            EquationKind::Eq => lhs.first_difference(&rhs),
            EquationKind::Leq => lhs.first_difference(&lhs.intersection(&rhs)),
        };
        let (u, v) = diff.ok_or_else(|| Error::Internal(format!("model does not refute {eq}")))?;
        let report = CounterexampleReport {
            equation: eq.clone(),
            model: Model::Rel(model),
            witness: Witness::Pair([u, v]),
            in_lhs: lhs.contains(u, v),
            integral,
            commutative,
        };
        report.verify()?;
        Ok(report)
    }

    pub fn for_lang(eq: &Equation, model: LangModel) -> Result<Self> {
        let lhs = eval_lang(&eq.lhs, &model)?;
        let rhs = eval_lang(&eq.rhs, &model)?;
        let w = match eq.kind {
            EquationKind::Eq => lhs.symmetric_difference(&rhs).min_by(|a, b| (a.len(), a).cmp(&(b.len(), b))),
            EquationKind::Leq => lhs.difference(&rhs).min_by(|a, b| (a.len(), a).cmp(&(b.len(), b))),
        }
        .cloned()
        .ok_or_else(|| Error::Internal(format!("model does not refute {eq}")))?;
        let report = CounterexampleReport {
            equation: eq.clone(),
            model: Model::Lang(model),
            in_lhs: lhs.contains(&w),
            witness: Witness::Word(w),
            integral: true,
            commutative: false,
        };
        report.verify()?;
        Ok(report)
    }

    /// Re-evaluates both sides in the stored model and checks the witness
    /// and the mode flags.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Internal(format!("report for {} fails: {what}", self.equation)));
        let (in_l, in_r) = match (&self.model, &self.witness) {
            (Model::Rel(m), Witness::Pair([u, v])) => {
                (eval_rel(&self.equation.lhs, m)?.contains(*u, *v), eval_rel(&self.equation.rhs, m)?.contains(*u, *v))
            }
            (Model::Lang(m), Witness::Word(w)) => {
                (eval_lang(&self.equation.lhs, m)?.contains(w), eval_lang(&self.equation.rhs, m)?.contains(w))
            }
            _ => return fail("witness kind does not match model kind"),
        };
        let separates = match self.equation.kind {
            EquationKind::Eq => in_l != in_r,
            EquationKind::Leq => in_l && !in_r,
        };
        if !separates || in_l != self.in_lhs {
            return fail("witness does not separate the two sides");
        }
        if let Model::Rel(m) = &self.model {
            if self.integral && !is_integral_model(m, DEFAULT_CLOSURE_CAP).is_integral() {
                return fail("model flagged integral is not");
            }
            if self.commutative && is_commutative_model(m, DEFAULT_CLOSURE_CAP) != Some(true) {
                return fail("model flagged commutative is not");
            }
        }
        Ok(())
    }

    pub fn rel_model(&self) -> Option<&RelModel> {
        match &self.model {
            Model::Rel(m) => Some(m),
            Model::Lang(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_equation;

    #[test]
    fn report_rejects_non_separating_model() {
        let eq = parse_equation("x;y = y;x").unwrap();
        let m = RelModel::new(1).unwrap().with("x", &[(0, 0)]).unwrap().with("y", &[]).unwrap();
        assert!(CounterexampleReport::for_rel(&eq, m, false, false).is_err());
    }

    #[test]
    fn report_for_swap_model() {
        let eq = parse_equation("1 & x;y = 1 & y;x").unwrap();
        let m = RelModel::new(2).unwrap().with("x", &[(0, 1)]).unwrap().with("y", &[(1, 0)]).unwrap();
        let r = CounterexampleReport::for_rel(&eq, m.clone(), false, false).unwrap();
        assert_eq!(r.witness, Witness::Pair([0, 0]));
        assert!(r.in_lhs);
        assert!(CounterexampleReport::for_rel(&eq, m, true, false).is_err());
    }

    #[test]
    fn word_reports() {
        let eq = parse_equation("x;y = y;x").unwrap();
        let m = LangModel::new(vec!['a', 'b']).unwrap().with("x", ["a"]).unwrap().with("y", ["b"]).unwrap();
        let r = CounterexampleReport::for_lang(&eq, m).unwrap();
        assert_eq!(r.witness, Witness::Word("ab".into()));
        let s = serde_json::to_value(&r).unwrap();
        assert_eq!(s["witness"]["word"], "ab");
        assert_eq!(s["model"]["alphabet"][0], "a");
    }
}
