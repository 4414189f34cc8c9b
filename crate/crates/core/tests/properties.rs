//! Property tests over random terms and models.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relmon::axioms::AxiomSet;
use relmon::model::{eval_rel, RelModel, Relation};
use relmon::prover::{prove, random_rewrites, Budget};
use relmon::term::{join_free_decompose, parse, random_term, render, Equation, Signature, Term};
use relmon::termgraph::{build_term_graph, canonical_countermodel, decide_leq_meet_comp_one};

const VARS: [&str; 3] = ["x", "y", "z"];

fn term(seed: u64, sig: Signature) -> Term {
    random_term(&mut ChaCha8Rng::seed_from_u64(seed), &VARS, 4, sig)
}

fn model(base: usize, codes: [u64; 3]) -> RelModel {
    let mut m = RelModel::new(base).unwrap();
    let mask = if base * base == 64 { u64::MAX } else { (1u64 << (base * base)) - 1 };
    for (v, c) in VARS.iter().zip(codes) {
        m.set(v, Relation::from_code(base, c & mask)).unwrap();
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let t = term(seed, Signature::FULL);
        prop_assert_eq!(parse(&render(&t)).unwrap(), t);
    }

    #[test]
    fn constructors_agree_with_evaluation(a in any::<u64>(), b in any::<u64>(), base in 1usize..4, codes in any::<[u64; 3]>()) {
        let (a, b) = (term(a, Signature::FULL), term(b, Signature::FULL));
        let m = model(base, codes);
        let (ra, rb) = (eval_rel(&a, &m).unwrap(), eval_rel(&b, &m).unwrap());
        prop_assert_eq!(eval_rel(&Term::meet2(a.clone(), b.clone()), &m).unwrap(), ra.intersection(&rb));
        prop_assert_eq!(eval_rel(&Term::join2(a.clone(), b.clone()), &m).unwrap(), ra.union(&rb));
        prop_assert_eq!(eval_rel(&Term::comp2(a, b), &m).unwrap(), ra.compose(&rb));
    }

    #[test]
    fn decomposition_preserves_evaluation(seed in any::<u64>(), base in 1usize..4, codes in any::<[u64; 3]>()) {
        let t = term(seed, Signature::FULL);
        let m = model(base, codes);
        let parts = join_free_decompose(&t);
        prop_assert!(parts.iter().all(|p| !p.contains_join()));
        let union = parts.iter().fold(Relation::empty(base), |acc, p| acc.union(&eval_rel(p, &m).unwrap()));
        prop_assert_eq!(union, eval_rel(&t, &m).unwrap());
    }

    #[test]
    fn canonical_model_satisfies_its_term(seed in any::<u64>()) {
        let t = term(seed, Signature::MEET_COMP_ONE);
        let g = build_term_graph(&t).unwrap();
        let m = canonical_countermodel(&t, &Default::default()).unwrap();
        prop_assert!(eval_rel(&t, &m).unwrap().contains(g.source, g.target));
    }

    #[test]
    fn term_graph_validity_is_sound(a in any::<u64>(), b in any::<u64>(), base in 1usize..4, codes in any::<[u64; 3]>()) {
        let (a, b) = (term(a, Signature::MEET_COMP_ONE), term(b, Signature::MEET_COMP_ONE));
        let m = model(base, codes);
        if decide_leq_meet_comp_one(&a, &b).unwrap() {
            prop_assert!(eval_rel(&a, &m).unwrap().is_subset(&eval_rel(&b, &m).unwrap()));
        }
        // Meeting with anything only shrinks.
        prop_assert!(decide_leq_meet_comp_one(&Term::meet2(a.clone(), b), &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prover_is_monotone_in_budget(seed in any::<u64>(), k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lhs = random_term(&mut rng, &VARS, 3, Signature::MEET_COMP_ONE);
        let rhs = random_rewrites(&lhs, AxiomSet::Integral, k, 4, &mut rng);
        let e = Equation::eq(lhs, rhs);
        let small = prove(&e, AxiomSet::Integral, &Budget::new(k, 5_000)).unwrap();
        let large = prove(&e, AxiomSet::Integral, &Budget::new(k + 2, 50_000)).unwrap();
        if small.is_proved() {
            prop_assert!(large.is_proved());
            prop_assert!(large.trace.len() <= small.trace.len());
            small.replay().unwrap();
        }
        prop_assert!(large.is_proved(), "{} not proved", e);
    }
}
