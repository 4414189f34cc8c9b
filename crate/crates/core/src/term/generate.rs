//! Exhaustive and random term generation for tests and self-checks.

use std::collections::BTreeSet;

use rand::Rng;

use super::Term;

/// Which constructors besides `&` and `;` may appear.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub join: bool,
    pub zero: bool,
    pub one: bool,
}

impl Signature {
    pub const MEET_COMP_ONE: Signature = Signature { join: false, zero: false, one: true };
    pub const FULL: Signature = Signature { join: true, zero: true, one: true };

    fn leaves(&self, vars: &[&str]) -> Vec<Term> {
        let mut out: Vec<Term> = vars.iter().map(|v| Term::var(v)).collect();
        if self.one {
            out.push(Term::Ide);
        }
        if self.zero {
            out.push(Term::Zero);
        }
        out
    }

    fn ops(&self) -> Vec<fn(Term, Term) -> Term> {
        let mut ops: Vec<fn(Term, Term) -> Term> = vec![Term::meet2, Term::comp2];
        if self.join {
            ops.push(Term::join2);
        }
        ops
    }
}

/// Normal forms of every syntax tree with at most `max_ops` binary
/// operations, deduplicated and sorted.
pub fn enumerate_terms(vars: &[&str], max_ops: usize, sig: Signature) -> Vec<Term> {
    let leaves = sig.leaves(vars);
    let ops = sig.ops();
    // by_ops[k]: normal forms of trees with exactly k operations.
    let mut by_ops: Vec<BTreeSet<Term>> = vec![leaves.into_iter().collect()];
    for k in 1..=max_ops {
        let mut layer = BTreeSet::new();
        for left in 0..k {
            let right = k - 1 - left;
            for a in &by_ops[left] {
                for b in &by_ops[right] {
                    for op in &ops {
                        layer.insert(op(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_ops.push(layer);
    }
    by_ops.into_iter().flatten().collect::<BTreeSet<_>>().into_iter().collect()
}

/// A random term whose syntax tree has depth at most `depth`.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, vars: &[&str], depth: usize, sig: Signature) -> Term {
    let leaves = sig.leaves(vars);
    let ops = sig.ops();
    fn go<R: Rng + ?Sized>(rng: &mut R, leaves: &[Term], ops: &[fn(Term, Term) -> Term], depth: usize) -> Term {
        if depth == 0 || rng.gen_bool(0.3) {
            return leaves[rng.gen_range(0..leaves.len())].clone();
        }
        let op = ops[rng.gen_range(0..ops.len())];
        op(go(rng, leaves, ops, depth - 1), go(rng, leaves, ops, depth - 1))
    }
    go(rng, &leaves, &ops, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;
    use rand::SeedableRng;

    #[test]
    fn small_enumeration() {
        let one_op = enumerate_terms(&["x"], 1, Signature::MEET_COMP_ONE);
        // x, 1, x;x, 1&x (and x&x = x, 1;x = x, 1&1 = 1;1 = 1).
        assert_eq!(one_op.len(), 4);
        assert!(one_op.contains(&parse("1 & x").unwrap()));
        let full = enumerate_terms(&["x", "y"], 2, Signature::FULL);
        assert!(full.contains(&parse("x + y;x").unwrap()));
        assert!(full.iter().all(|t| t.op_count() <= 2));
    }

    #[test]
    fn random_terms_respect_signature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let t = random_term(&mut rng, &["x", "y"], 4, Signature::MEET_COMP_ONE);
            assert!(!t.contains_join() && !t.contains_zero());
        }
    }
}
