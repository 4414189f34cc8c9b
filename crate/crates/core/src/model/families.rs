//! Structured model families for the integral and commutative searches.
//!
//! Random relations on small bases are rarely integral and rarely commute,
//! so the searches draw most candidates from these families instead.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{RelModel, Relation};

/// A finite group given by its multiplication table on `{0..order-1}`,
/// with `0` as the neutral element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    table: Vec<Vec<usize>>,
}

impl Group {
    pub fn cyclic(n: usize) -> Self {
        Group { table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    /// `Z2 x Z2`, elements encoded as two-bit masks under XOR.
    pub fn klein() -> Self {
        Group { table: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect() }
    }

    /// The symmetric group on three letters, elements indexed as listed.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index([b[a[0]], b[a[1]], b[a[2]]])).collect())
            .collect();
        Group { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// `{(g, g*s) : s in subset}`; compositions of these follow the group
    /// product of the subsets, and the only subidentities are `0` and `1`.
    pub fn relation(&self, subset: &[usize]) -> Relation {
        let n = self.order();
        Relation::from_pairs(n, (0..n).flat_map(|g| subset.iter().map(move |&s| (g, self.table[g][s]))))
    }
}

/// Model on the group's elements with each variable read as the relation
/// of the given subset.
pub fn cayley_model(group: &Group, vars: &[(&str, Vec<usize>)]) -> RelModel {
    let mut m = RelModel::new(group.order()).expect("group order within base bounds");
    for (name, subset) in vars {
        m.set(name, group.relation(subset)).expect("same base");
    }
    m
}

/// Groups available on exactly `base` points.
pub(crate) fn groups_of_order(base: usize, abelian_only: bool) -> Vec<Group> {
    let mut gs = vec![Group::cyclic(base)];
    if base == 4 {
        gs.push(Group::klein());
    }
    if base == 6 && !abelian_only {
        gs.push(Group::symmetric3());
    }
    gs
}

fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

pub(crate) fn random_relation<R: Rng>(rng: &mut R, n: usize) -> Relation {
    let code: u64 = rng.gen();
    let bits = n * n;
    let code = if bits >= 64 { code } else { code & ((1u64 << bits) - 1) };
    if bits <= 64 {
        Relation::from_code(n, code)
    } else {
        Relation::from_pairs(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
    }
}

pub(crate) fn random_cayley<R: Rng>(rng: &mut R, base: usize, vars: &[&str], abelian_only: bool) -> RelModel {
    let groups = groups_of_order(base, abelian_only);
    let g = groups.choose(rng).expect("at least the cyclic group");
    let assignment: Vec<(&str, Vec<usize>)> =
        vars.iter().map(|v| (*v, random_subset(rng, g.order()))).collect();
    cayley_model(g, &assignment)
}

pub(crate) fn random_model<R: Rng>(rng: &mut R, base: usize, vars: &[&str]) -> RelModel {
    let mut m = RelModel::new(base).expect("base within bounds");
    for v in vars {
        m.set(v, random_relation(rng, base)).expect("same base");
    }
    m
}

/// Every variable a subidentity: such valuations always commute.
pub(crate) fn random_diagonal<R: Rng>(rng: &mut R, base: usize, vars: &[&str]) -> RelModel {
    let mut m = RelModel::new(base).expect("base within bounds");
    for v in vars {
        let s = random_subset(rng, base);
        m.set(v, Relation::from_pairs(base, s.into_iter().map(|i| (i, i)))).expect("same base");
    }
    m
}

/// Every variable a union of powers of one random relation.
pub(crate) fn random_powers<R: Rng>(rng: &mut R, base: usize, vars: &[&str]) -> RelModel {
    let r = random_relation(rng, base);
    let mut powers = vec![Relation::identity(base)];
    for _ in 0..base {
        let next = powers.last().unwrap().compose(&r);
        powers.push(next);
    }
    let mut m = RelModel::new(base).expect("base within bounds");
    for v in vars {
        let mut acc = Relation::empty(base);
        for p in &powers {
            if rng.gen_bool(0.4) {
                acc = acc.union(p);
            }
        }
        m.set(v, acc).expect("same base");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_integral_model, DEFAULT_CLOSURE_CAP};

    #[test]
    fn group_tables_are_groups() {
        for g in [Group::cyclic(5), Group::klein(), Group::symmetric3()] {
            let n = g.order();
            for a in 0..n {
                assert_eq!(g.table[0][a], a);
                assert!((0..n).any(|b| g.table[a][b] == 0));
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.table[g.table[a][b]][c], g.table[a][g.table[b][c]]);
                    }
                }
            }
        }
        assert!(!Group::symmetric3().is_abelian());
        assert!(Group::klein().is_abelian());
    }

    #[test]
    fn cayley_models_are_integral() {
        let g = Group::symmetric3();
        let m = cayley_model(&g, &[("x", vec![1, 3]), ("y", vec![0, 4])]);
        assert!(is_integral_model(&m, DEFAULT_CLOSURE_CAP).is_integral());
        let z3 = cayley_model(&Group::cyclic(3), &[("x", vec![1]), ("y", vec![2])]);
        assert_eq!(z3.get("x").unwrap(), &Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]));
    }
}
