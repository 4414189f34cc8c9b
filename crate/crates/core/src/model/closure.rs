use std::collections::HashSet;

use serde::Serialize;

use super::{RelModel, Relation};

/// Default element cap for generated subalgebras.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

/// The subalgebra generated by a model's valuation, possibly truncated.
#[derive(Clone, Debug)]
pub struct Closure {
    pub elements: Vec<Relation>,
    /// `true` when the set is closed under `+`, `&` and `;`.
    pub complete: bool,
}

impl Closure {
    pub fn contains(&self, r: &Relation) -> bool {
        self.elements.contains(r)
    }
}

/// Closes the valuation range together with `0` and `1` under union,
/// intersection and composition, stopping once `cap` elements exist.
pub fn generated_closure(m: &RelModel, cap: usize) -> Closure {
    close(m, cap, true, |_| false).0
}

/// Same as [`generated_closure`] without union: the subalgebra for the
/// join-free signature.
pub fn generated_closure_join_free(m: &RelModel, cap: usize) -> Closure {
    close(m, cap, false, |_| false).0
}

/// Runs the closure, stopping early when `stop` accepts a new element.
fn close(
    m: &RelModel,
    cap: usize,
    with_join: bool,
    stop: impl Fn(&Relation) -> bool,
) -> (Closure, Option<Relation>) {
    let cap = cap.max(1);
    let n = m.base();
    let mut seen: HashSet<Relation> = HashSet::new();
    let mut elems: Vec<Relation> = Vec::new();
    let seeds = [Relation::empty(n), Relation::identity(n)]
        .into_iter()
        .chain(m.vars().map(|(_, r)| r.clone()));
    for r in seeds {
        if seen.insert(r.clone()) {
            if stop(&r) {
                return (Closure { elements: elems, complete: false }, Some(r));
            }
            elems.push(r);
        }
    }
    if elems.len() > cap {
        elems.truncate(cap);
        return (Closure { elements: elems, complete: false }, None);
    }
    // Element i is combined with every element j <= i the first time it is
    // reached, so each unordered pair is visited once.
    let mut i = 0;
    while i < elems.len() {
        for j in 0..=i {
            let (a, b) = (&elems[i], &elems[j]);
            let union = with_join.then(|| a.union(b));
            let products = [Some(a.intersection(b)), Some(a.compose(b)), Some(b.compose(a)), union];
            for p in products.into_iter().flatten() {
                if seen.contains(&p) {
                    continue;
                }
                if stop(&p) {
                    return (Closure { elements: elems, complete: false }, Some(p));
                }
                if elems.len() == cap {
                    return (Closure { elements: elems, complete: false }, None);
                }
                seen.insert(p.clone());
                elems.push(p);
            }
        }
        i += 1;
    }
    (Closure { elements: elems, complete: true }, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Integrality {
    Integral,
    /// Carries a proper nonempty subidentity found in the subalgebra.
    NotIntegral { witness: Vec<[usize; 2]> },
    /// The closure hit its cap before a verdict.
    Unknown,
}

impl Integrality {
    pub fn is_integral(&self) -> bool {
        matches!(self, Integrality::Integral)
    }
}

/// Whether `1` is an atom of the generated subalgebra.
///
/// A proper subidentity met before truncation is still a valid refutation,
/// so `NotIntegral` may be returned even when the closure is incomplete.
pub fn is_integral_model(m: &RelModel, cap: usize) -> Integrality {
    let id = Relation::identity(m.base());
    let (closure, hit) = close(m, cap, true, |r| r.is_subset(&id) && !r.is_empty() && *r != id);
    match hit {
        Some(w) => Integrality::NotIntegral { witness: w.pairs().map(|(u, v)| [u, v]).collect() },
        None if closure.complete => Integrality::Integral,
        None => Integrality::Unknown,
    }
}

/// Generators commute pairwise and so does the whole generated subalgebra.
/// `None` when the closure is truncated.
pub fn is_commutative_model(m: &RelModel, cap: usize) -> Option<bool> {
    let gens: Vec<&Relation> = m.vars().map(|(_, r)| r).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if a.compose(b) != b.compose(a) {
                return Some(false);
            }
        }
    }
    let c = generated_closure(m, cap);
    if !c.complete {
        return None;
    }
    for (i, a) in c.elements.iter().enumerate() {
        for b in &c.elements[i + 1..] {
            if a.compose(b) != b.compose(a) {
                return Some(false);
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotations() -> RelModel {
        RelModel::new(3)
            .unwrap()
            .with("x", &[(0, 1), (1, 2), (2, 0)])
            .unwrap()
            .with("y", &[(0, 2), (1, 0), (2, 1)])
            .unwrap()
    }

    #[test]
    fn single_point_closure() {
        let m = RelModel::new(1).unwrap().with("x", &[(0, 0)]).unwrap();
        let c = generated_closure(&m, DEFAULT_CLOSURE_CAP);
        assert!(c.complete);
        assert_eq!(c.elements.len(), 2);
    }

    #[test]
    fn rotation_closure_brute_force() {
        // Brute-force oracle: iterate all binary operations until nothing new.
        let m = rotations();
        let mut set: std::collections::BTreeSet<Relation> = [
            Relation::empty(3),
            Relation::identity(3),
            m.get("x").unwrap().clone(),
            m.get("y").unwrap().clone(),
        ]
        .into();
        loop {
            let snapshot: Vec<_> = set.iter().cloned().collect();
            let before = set.len();
            for a in &snapshot {
                for b in &snapshot {
                    set.insert(a.union(b));
                    set.insert(a.intersection(b));
                    set.insert(a.compose(b));
                }
            }
            if set.len() == before {
                break;
            }
        }
        let c = generated_closure(&m, DEFAULT_CLOSURE_CAP);
        assert!(c.complete);
        let got: std::collections::BTreeSet<_> = c.elements.into_iter().collect();
        assert_eq!(got, set);
        // Unions of the three rotations together with the empty relation.
        assert_eq!(got.len(), 8);
        let jf = generated_closure_join_free(&m, DEFAULT_CLOSURE_CAP);
        assert!(jf.complete);
        let jf: std::collections::BTreeSet<_> = jf.elements.into_iter().collect();
        let expected: std::collections::BTreeSet<_> = [
            Relation::empty(3),
            Relation::identity(3),
            m.get("x").unwrap().clone(),
            m.get("y").unwrap().clone(),
        ]
        .into();
        assert_eq!(jf, expected);
        let x = m.get("x").unwrap();
        assert_eq!(x.compose(x), *m.get("y").unwrap());
    }

    #[test]
    fn swap_closure_splits_identity() {
        let m = RelModel::new(2).unwrap().with("x", &[(0, 1)]).unwrap().with("y", &[(1, 0)]).unwrap();
        let c = generated_closure(&m, DEFAULT_CLOSURE_CAP);
        assert!(c.contains(&Relation::from_pairs(2, [(0, 0)])));
        assert!(c.contains(&Relation::from_pairs(2, [(1, 1)])));
    }

    #[test]
    fn integrality_examples() {
        assert_eq!(is_integral_model(&rotations(), DEFAULT_CLOSURE_CAP), Integrality::Integral);
        let swap = RelModel::new(2).unwrap().with("x", &[(0, 1)]).unwrap().with("y", &[(1, 0)]).unwrap();
        assert!(matches!(is_integral_model(&swap, DEFAULT_CLOSURE_CAP), Integrality::NotIntegral { .. }));
        for code in 0..2 {
            let m = RelModel::new(1).unwrap().with("x", &[(0, 0)][..code]).unwrap();
            assert!(is_integral_model(&m, DEFAULT_CLOSURE_CAP).is_integral());
        }
    }

    #[test]
    fn truncation_is_reported() {
        let c = generated_closure(&rotations(), 3);
        assert!(!c.complete);
        assert_eq!(c.elements.len(), 3);
        assert_eq!(is_integral_model(&rotations(), 3), Integrality::Unknown);
    }

    #[test]
    fn commutativity() {
        assert_eq!(is_commutative_model(&rotations(), DEFAULT_CLOSURE_CAP), Some(true));
        let swap = RelModel::new(2).unwrap().with("x", &[(0, 1)]).unwrap().with("y", &[(1, 0)]).unwrap();
        assert_eq!(is_commutative_model(&swap, DEFAULT_CLOSURE_CAP), Some(false));
    }
}
