//! The axiom systems: the base system for `(&, ;, 0, 1)`, its integral
//! extension, the join variants, the language system and the commutative
//! system.
//!
//! Axioms are stated over metavariables. Several of them (the semilattice,
//! monoid and zero laws) hold syntactically in normal form and are listed
//! for completeness; the prover treats them as no-ops.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::term::{parse_equation, Equation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomSet {
    Base,
    Integral,
    BaseJoin,
    IntegralJoin,
    IntegralLang,
    Commutative,
    CommutativeJoin,
}

impl AxiomSet {
    pub const ALL: [AxiomSet; 7] = [
        AxiomSet::Base,
        AxiomSet::Integral,
        AxiomSet::BaseJoin,
        AxiomSet::IntegralJoin,
        AxiomSet::IntegralLang,
        AxiomSet::Commutative,
        AxiomSet::CommutativeJoin,
    ];

    pub fn has_join(self) -> bool {
        matches!(
            self,
            AxiomSet::BaseJoin | AxiomSet::IntegralJoin | AxiomSet::IntegralLang | AxiomSet::CommutativeJoin
        )
    }

    pub fn is_integral(self) -> bool {
        matches!(self, AxiomSet::Integral | AxiomSet::IntegralJoin | AxiomSet::IntegralLang)
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSet::Base => "base",
            AxiomSet::Integral => "integral",
            AxiomSet::BaseJoin => "base-join",
            AxiomSet::IntegralJoin => "integral-join",
            AxiomSet::IntegralLang => "integral-lang",
            AxiomSet::Commutative => "commutative",
            AxiomSet::CommutativeJoin => "commutative-join",
        }
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AxiomSet::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = AxiomSet::ALL.iter().map(|a| a.name()).collect();
                format!("unknown axiom set '{s}' (expected one of {})", names.join(", "))
            })
    }
}

impl<'de> Deserialize<'de> for AxiomSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A named axiom schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom {
    pub id: &'static str,
    pub equation: Equation,
}

const SEMILATTICE_MEET: &[(&str, &str)] = &[
    ("meet-idempotent", "x & x = x"),
    ("meet-commutative", "x & y = y & x"),
    ("meet-associative", "(x & y) & z = x & (y & z)"),
];

const MONOID: &[(&str, &str)] = &[
    ("comp-associative", "(x;y);z = x;(y;z)"),
    ("comp-unit-left", "1;x = x"),
    ("comp-unit-right", "x;1 = x"),
];

const BASE: &[(&str, &str)] = &[
    ("monotonicity", "(x & x1);(y & y1) <= x;y"),
    ("zero-meet", "0 = 0 & x"),
    ("zero-comp-left", "0 = 0;x"),
    ("zero-comp-right", "0 = x;0"),
    ("subid-product", "(1 & x);(1 & y) = 1 & x & y"),
    ("subid-left", "(1 & x);(y & z) = (1 & x);y & z"),
    ("subid-right", "(x & y);(1 & z) = x & y;(1 & z)"),
];

const INTEGRAL: &[(&str, &str)] = &[
    ("integral-swap", "1 & x;y = 1 & y;x"),
    ("integral-commute", "(1 & x);y = y;(1 & x)"),
];

const JOIN: &[(&str, &str)] = &[
    ("join-idempotent", "x + x = x"),
    ("join-commutative", "x + y = y + x"),
    ("join-associative", "(x + y) + z = x + (y + z)"),
    ("absorb-meet-join", "x & (x + y) = x"),
    ("absorb-join-meet", "x + x & y = x"),
    ("dist-meet-join", "x & (y + z) = x & y + x & z"),
    ("dist-join-meet", "x + y & z = (x + y) & (x + z)"),
    ("additive-left", "(x + y);z = x;z + y;z"),
    ("additive-right", "x;(y + z) = x;y + x;z"),
];

const LANG: &[(&str, &str)] = &[("empty-word", "x;y & 1 = (x & 1);(y & 1)")];

const COMMUTATIVE: &[(&str, &str)] = &[("commutativity", "x;y = y;x")];

/// The axioms of a system in a fixed order.
pub fn axiom_list(set: AxiomSet) -> Vec<Axiom> {
    let mut groups: Vec<&[(&str, &str)]> = vec![SEMILATTICE_MEET, MONOID, BASE];
    if set.is_integral() {
        groups.push(INTEGRAL);
    }
    if set.has_join() {
        groups.push(JOIN);
    }
    if set == AxiomSet::IntegralLang {
        groups.push(LANG);
    }
    if matches!(set, AxiomSet::Commutative | AxiomSet::CommutativeJoin) {
        groups.push(COMMUTATIVE);
    }
    groups
        .into_iter()
        .flatten()
        .map(|(id, src)| Axiom { id, equation: parse_equation(src).expect("axiom table parses") })
        .collect()
}

/// Looks up an axiom by id across every system.
pub fn axiom_by_id(id: &str) -> Option<Axiom> {
    axiom_list(AxiomSet::IntegralLang)
        .into_iter()
        .chain(axiom_list(AxiomSet::CommutativeJoin))
        .find(|a| a.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn has(set: AxiomSet, id: &str) -> bool {
        axiom_list(set).iter().any(|a| a.id == id)
    }

    #[test]
    fn system_contents() {
        let integral = axiom_list(AxiomSet::Integral);
        let swap = integral.iter().find(|a| a.id == "integral-swap").unwrap();
        assert_eq!(swap.equation.lhs, parse("1 & x;y").unwrap());
        assert_eq!(swap.equation.rhs, parse("1 & y;x").unwrap());
        let product = axiom_list(AxiomSet::Base).into_iter().find(|a| a.id == "subid-product").unwrap();
        assert_eq!(product.equation.rhs, parse("1 & x & y").unwrap());
        assert!(has(AxiomSet::Commutative, "commutativity"));
        assert!(!has(AxiomSet::Base, "integral-swap"));
        assert!(has(AxiomSet::IntegralLang, "empty-word") && has(AxiomSet::IntegralLang, "additive-left"));
        assert!(!has(AxiomSet::IntegralJoin, "empty-word"));
        assert!(has(AxiomSet::CommutativeJoin, "dist-meet-join"));
    }

    #[test]
    fn ids_are_unique_and_names_round_trip() {
        for set in AxiomSet::ALL {
            let ids: std::collections::BTreeSet<_> = axiom_list(set).iter().map(|a| a.id).collect();
            assert_eq!(ids.len(), axiom_list(set).len());
            assert_eq!(set.name().parse::<AxiomSet>().unwrap(), set);
        }
        assert!("nope".parse::<AxiomSet>().is_err());
        assert!(axiom_by_id("commutativity").is_some());
    }
}
