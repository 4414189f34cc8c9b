//! Subidentity bases and filter membership.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::axioms::AxiomSet;
use crate::error::{Error, Result};
use crate::model::{is_integral_model, search_rel_counterexample, RelMode, RelModel, RelSearchBounds};
use crate::prover::{prove, prove_leq, Budget, ProofOutcome};
use crate::term::{Equation, Term};
use crate::termgraph::{build_term_graph, canonical_countermodel, decide_leq_meet_comp_one};

/// Closure cap for the quick integrality test on canonical models; larger
/// closures fall through to the prover.
const QUICK_CLOSURE_CAP: usize = 512;

#[derive(Clone, Debug, Serialize)]
pub struct SatBudget {
    /// Longest product of subterms of `theta` tried as a basis candidate.
    pub pool_depth: usize,
    pub basis: Budget,
    pub membership: Budget,
}

impl Default for SatBudget {
    fn default() -> Self {
        SatBudget { pool_depth: 2, basis: Budget::new(4, 5_000), membership: Budget::new(4, 5_000) }
    }
}

/// The subidentities `e` with `e;theta = theta` found among a finite pool.
#[derive(Clone, Debug, Serialize)]
pub struct SubidentityBasis {
    pub theta: Term,
    pub pool: Vec<Term>,
    /// Always starts with `1`.
    pub generators: Vec<Term>,
    /// Proofs of `e;theta = theta` for the generators other than `1`.
    #[serde(skip)]
    pub proofs: Vec<ProofOutcome>,
    /// Meet of the generators: the least element of the filter they
    /// generate that the basis knows about.
    pub eps: Term,
}

/// `{1} ∪ {1 & p}` for products `p` of at most `depth` subterms.
fn candidate_pool(theta: &Term, depth: usize) -> Vec<Term> {
    let subs: Vec<Term> = theta.subterms().into_iter().filter(|t| !t.is_zero()).collect();
    let mut products: BTreeSet<Term> = subs.iter().cloned().collect();
    let mut layer: Vec<Term> = subs.clone();
    for _ in 1..depth {
        layer = layer.iter().flat_map(|p| subs.iter().map(move |s| Term::comp2(p.clone(), s.clone()))).collect();
        products.extend(layer.iter().cloned());
    }
    let mut pool: BTreeSet<Term> = products.into_iter().map(|p| Term::meet2(Term::Ide, p)).collect();
    pool.remove(&Term::Ide);
    std::iter::once(Term::Ide).chain(pool).collect()
}

/// Whether `a <= b` fails in the canonical model of `a` and that model is
/// integral, which certifies that it is not derivable from the integral
/// axioms.
fn canonical_refutes(a: &Term, b: &Term) -> bool {
    if a.contains_join() || b.contains_join() || a.contains_zero() {
        return false;
    }
    let extra = b.vars();
    let Ok(m) = canonical_countermodel(a, &extra) else { return false };
    let Ok(g) = build_term_graph(a) else { return false };
    let Ok(rb) = m.eval(b) else { return false };
    !rb.contains(g.source, g.target) && is_integral_model(&m, QUICK_CLOSURE_CAP).is_integral()
}

pub fn build_basis(theta: &Term, budget: &SatBudget) -> Result<SubidentityBasis> {
    let theta = theta.normalize();
    if theta.contains_join() {
        return Err(Error::OutOfFragment(format!("theta '{theta}' contains '+'")));
    }
    if theta.is_zero() {
        return Err(Error::ZeroTheta(format!("'{theta}' normalizes to 0")));
    }
    if prove(&Equation::eq(theta.clone(), Term::Zero), AxiomSet::Integral, &budget.basis)?.is_proved() {
        return Err(Error::ZeroTheta(format!("'{theta}' = 0 is derivable")));
    }
    let pool = candidate_pool(&theta, budget.pool_depth);
    let quick = RelSearchBounds { max_base: 3, random_samples: 64, exhaustive_limit: 512, ..Default::default() };
    let mut generators = vec![Term::Ide];
    let mut proofs = Vec::new();
    for e in &pool[1..] {
        let et = Term::comp2(e.clone(), theta.clone());
        // `e;theta <= theta` always holds; only the converse can fail.
        if canonical_refutes(&theta, &et) {
            continue;
        }
        let eq = Equation::eq(et.clone(), theta.clone());
        if search_rel_counterexample(&Equation::leq(theta.clone(), et), RelMode::Integral, &quick).found() {
            continue;
        }
        let out = prove(&eq, AxiomSet::Integral, &budget.basis)?;
        if out.is_proved() {
            generators.push(e.clone());
            proofs.push(out);
        }
    }
    let eps = Term::meet(generators.iter().cloned());
    Ok(SubidentityBasis { theta, pool, generators, proofs, eps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    /// Certified by an integral model.
    NotMember,
    Unknown,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

/// The filter generated by `{e1;g;e2}` for `g` in `cores` and `e1`, `e2` in
/// the subidentity filter of the basis. Since meets of such elements
/// collapse to `e;(g1 & ... & gk);e`, the filter is principal above
/// `eps;(&cores)`, where `eps` is the least known subidentity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FilterDescriptor {
    pub cores: Vec<Term>,
}

impl FilterDescriptor {
    pub fn new(cores: Vec<Term>) -> Self {
        FilterDescriptor { cores }
    }

    /// The subidentity filter itself.
    pub fn e() -> Self {
        FilterDescriptor { cores: vec![Term::Ide] }
    }

    pub fn is_e(&self) -> bool {
        self.cores == [Term::Ide]
    }

    pub fn core_meet(&self) -> Term {
        Term::meet(self.cores.iter().cloned())
    }

    /// Conjuncts of the cores; each is a member.
    pub fn conjuncts(&self) -> BTreeSet<Term> {
        self.cores.iter().flat_map(|c| c.meet_view().iter().cloned()).collect()
    }

    pub fn add_core(&mut self, t: Term) -> bool {
        if self.cores.contains(&t) {
            return false;
        }
        self.cores.push(t);
        true
    }
}

/// Membership oracle with memoization, shared by a saturation run.
#[derive(Debug)]
pub struct MembershipOracle {
    pub eps: Term,
    pub budget: Budget,
    memo: Mutex<HashMap<(Term, Term), Membership>>,
    fixes: Mutex<HashMap<(Term, Term), bool>>,
}

impl Clone for MembershipOracle {
    fn clone(&self) -> Self {
        MembershipOracle {
            eps: self.eps.clone(),
            budget: self.budget.clone(),
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
            fixes: Mutex::new(self.fixes.lock().unwrap().clone()),
        }
    }
}

impl MembershipOracle {
    pub fn new(eps: Term, budget: Budget) -> Self {
        MembershipOracle { eps, budget, memo: Mutex::new(HashMap::new()), fixes: Mutex::new(HashMap::new()) }
    }

    /// The least element of the filter as far as the basis knows.
    pub fn bottom(&self, f: &FilterDescriptor) -> Term {
        Term::comp2(self.eps.clone(), f.core_meet())
    }

    /// Decides `sigma ∈ f` as `eps;(&cores) <= sigma`. The integral axioms
    /// make `eps;g;eps` and `eps;g` equal, so the shorter form is used.
    pub fn member(&self, sigma: &Term, f: &FilterDescriptor) -> Membership {
        let g = f.core_meet();
        let bottom = self.bottom(f);
        let conj = f.conjuncts();
        if sigma.meet_view().iter().all(|c| conj.contains(c)) {
            return Membership::Member;
        }
        let key = (bottom.clone(), sigma.clone());
        if let Some(m) = self.memo.lock().unwrap().get(&key) {
            return *m;
        }
        let verdict = self.decide(&bottom, &g, sigma);
        self.memo.lock().unwrap().insert(key, verdict);
        verdict
    }

    /// Whether `e;s = s` is derivable within the budget.
    pub fn fixes(&self, e: &Term, s: &Term) -> bool {
        let key = (e.clone(), s.clone());
        if let Some(v) = self.fixes.lock().unwrap().get(&key) {
            return *v;
        }
        let es = Term::comp2(e.clone(), s.clone());
        let v = !canonical_refutes(s, &es)
            && (decide_leq_meet_comp_one(s, &es).unwrap_or(false)
                || prove(&Equation::eq(es, s.clone()), AxiomSet::Integral, &self.budget).is_ok_and(|o| o.is_proved()));
        self.fixes.lock().unwrap().insert(key, v);
        v
    }

    fn decide(&self, bottom: &Term, g: &Term, sigma: &Term) -> Membership {
        if sigma.is_zero() {
            // The one-point model with every variable full is integral and
            // gives every zero-free term the full relation.
            return if bottom.contains_zero() { Membership::Member } else { Membership::NotMember };
        }
        let fragment = !sigma.contains_join() && !sigma.contains_zero() && !bottom.contains_zero();
        if fragment {
            // Valid in every relation algebra, hence derivable by completeness
            // of the integral axioms for integral relation algebras.
            for lower in [g, bottom] {
                if decide_leq_meet_comp_one(lower, sigma).unwrap_or(false) {
                    return Membership::Member;
                }
            }
            if canonical_refutes(bottom, sigma) {
                return Membership::NotMember;
            }
        }
        match prove_leq(bottom, sigma, AxiomSet::Integral, &self.budget) {
            Ok(out) if out.is_proved() => Membership::Member,
            _ => Membership::Unknown,
        }
    }
}

/// Evaluation in the one-point model with every variable full.
pub(crate) fn nonzero_certificate(t: &Term) -> bool {
    let mut m = RelModel::new(1).expect("base 1");
    let full = crate::model::Relation::full(1);
    for v in t.vars() {
        m.set(&v, full.clone()).expect("same base");
    }
    m.eval(t).map(|r| !r.is_empty()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{is_subidentity_syntactic, parse};

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn pool_shape() {
        let pool = candidate_pool(&t("x;y"), 2);
        assert_eq!(pool[0], Term::Ide);
        assert!(pool.contains(&t("1 & x")) && pool.contains(&t("1 & y;x")) && pool.contains(&t("1 & x;y;x;y")));
        assert!(pool[1..].iter().all(is_subidentity_syntactic));
    }

    #[test]
    fn basis_examples() {
        let b = build_basis(&t("x;y"), &SatBudget::default()).unwrap();
        assert_eq!(b.generators[0], Term::Ide);
        let b = build_basis(&t("(1 & z);x"), &SatBudget::default()).unwrap();
        assert!(b.generators.contains(&t("1 & z")));
        let b = build_basis(&t("x"), &SatBudget::default()).unwrap();
        assert_eq!(b.generators, vec![Term::Ide]);
        assert!(matches!(build_basis(&Term::Zero, &SatBudget::default()), Err(Error::ZeroTheta(_))));
    }

    #[test]
    fn membership_examples() {
        let o = MembershipOracle::new(Term::Ide, Budget::new(3, 2_000));
        let f = FilterDescriptor::new(vec![t("x;y")]);
        assert_eq!(o.member(&t("x;y"), &f), Membership::Member);
        assert_eq!(o.member(&t("x;y & x;y"), &f), Membership::Member);
        assert_eq!(o.member(&t("x"), &f), Membership::NotMember);
        assert_eq!(o.member(&Term::Zero, &f), Membership::NotMember);
        assert_eq!(o.member(&Term::Ide, &f), Membership::NotMember);
        let loose = FilterDescriptor::new(vec![t("(x & z);y")]);
        assert_eq!(o.member(&t("x;y"), &loose), Membership::Member);
        assert_eq!(o.member(&Term::Ide, &FilterDescriptor::e()), Membership::Member);
        let sub = MembershipOracle::new(t("1 & z"), Budget::new(3, 2_000));
        assert_eq!(sub.member(&t("z"), &FilterDescriptor::e()), Membership::Member);
    }

    #[test]
    fn certificates() {
        assert!(nonzero_certificate(&t("x;y & 1")));
        assert!(!nonzero_certificate(&Term::Zero));
    }
}
