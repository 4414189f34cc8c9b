//! Inequalities with joins, reduced to join-free ones.
//!
//! Both sides are split into joins of join-free terms, `a = a1 + ... + an`
//! and `b = b1 + ... + bm`, and `a <= b` is accepted when every `ai` lies
//! below some `bj`. For relation models and join-free `ai` this is exact:
//! the canonical countermodel of `ai` satisfies `ai` at one pair, so a join
//! containing that pair must have a disjunct that does.

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::AxiomSet;
use crate::error::Result;
use crate::model::{search_rel_counterexample, RelMode, RelSearchBounds};
use crate::prover::{prove_leq, Budget};
use crate::term::{join_free_decompose, Equation, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
    Unknown,
}

/// Oracle verdict for one disjunct pair.
#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub lhs: Term,
    pub rhs: Term,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinReduction {
    pub verdict: Verdict,
    pub lhs_disjuncts: Vec<Term>,
    pub rhs_disjuncts: Vec<Term>,
    /// For each left disjunct, the index of a right disjunct above it.
    pub matched: Vec<Option<usize>>,
    pub pairs: Vec<PairVerdict>,
}

/// Decides `a <= b` through the join-free decomposition, with `oracle`
/// deciding the join-free pairs. One left disjunct that the oracle places
/// below no right disjunct makes the inequality invalid; otherwise any
/// unknown pair leaves it unknown.
pub fn decide_with_join_reduction<F>(a: &Term, b: &Term, oracle: F) -> Result<JoinReduction>
where
    F: Fn(&Term, &Term) -> Result<Verdict> + Sync,
{
    let lhs = join_free_decompose(&a.normalize());
    let rhs = join_free_decompose(&b.normalize());
    let rows: Vec<Vec<Verdict>> = lhs
        .par_iter()
        .map(|ai| rhs.iter().map(|bj| oracle(ai, bj)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut matched = Vec::new();
    let (mut any_invalid, mut any_unknown) = (false, false);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            pairs.push(PairVerdict { lhs: lhs[i].clone(), rhs: rhs[j].clone(), verdict: *v });
        }
        let hit = row.iter().position(|v| *v == Verdict::Valid);
        matched.push(hit);
        if hit.is_none() {
            if row.iter().all(|v| *v == Verdict::Invalid) {
                any_invalid = true;
            } else {
                any_unknown = true;
            }
        }
    }
    let verdict = if any_invalid {
        Verdict::Invalid
    } else if any_unknown {
        Verdict::Unknown
    } else {
        Verdict::Valid
    };
    Ok(JoinReduction { verdict, lhs_disjuncts: lhs, rhs_disjuncts: rhs, matched, pairs })
}

/// Exact oracle for relation models via term graphs.
pub fn term_graph_oracle(a: &Term, b: &Term) -> Result<Verdict> {
    Ok(if super::decide_leq_meet_comp_one(a, b)? { Verdict::Valid } else { Verdict::Invalid })
}

/// Bounded oracle for integral relation models: a proof from the integral
/// axioms, else a counterexample among integral models, else unknown.
pub fn integral_oracle<'a>(
    budget: &'a Budget,
    bounds: &'a RelSearchBounds,
) -> impl Fn(&Term, &Term) -> Result<Verdict> + Sync + 'a {
    move |a, b| {
        if prove_leq(a, b, AxiomSet::Integral, budget)?.is_proved() {
            return Ok(Verdict::Valid);
        }
        let eq = Equation::leq(a.clone(), b.clone());
        Ok(if search_rel_counterexample(&eq, RelMode::Integral, bounds).found() {
            Verdict::Invalid
        } else {
            Verdict::Unknown
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn reduce(a: &str, b: &str) -> JoinReduction {
        decide_with_join_reduction(&parse(a).unwrap(), &parse(b).unwrap(), term_graph_oracle).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(reduce("x + y", "y + x").verdict, Verdict::Valid);
        assert_eq!(reduce("x;(y + z)", "x;y + x;z").verdict, Verdict::Valid);
        let r = reduce("x + y", "x");
        assert_eq!(r.verdict, Verdict::Invalid);
        assert_eq!(r.matched, vec![Some(0), None]);
        assert_eq!(reduce("0", "x").verdict, Verdict::Valid);
        assert_eq!(reduce("x", "0").verdict, Verdict::Invalid);
    }

    #[test]
    fn integral_oracle_is_three_valued() {
        let budget = Budget::new(3, 20_000);
        let bounds = RelSearchBounds { max_base: 3, random_samples: 100, ..Default::default() };
        let oracle = integral_oracle(&budget, &bounds);
        let v = |a: &str, b: &str| oracle(&parse(a).unwrap(), &parse(b).unwrap()).unwrap();
        assert_eq!(v("1 & x;y", "1 & y;x"), Verdict::Valid);
        assert_eq!(v("x;y", "x"), Verdict::Invalid);
        let r = decide_with_join_reduction(&parse("1 & x;y + 1 & y;x").unwrap(), &parse("1 & y;x").unwrap(), oracle)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Valid);
    }
}
