use ftl_core::fol::clause::lit;
use ftl_core::fol::{
    brand_transform, nnf, skolemize_cnf, Clause, ClauseSource, Formula, SkolemCounter, Term,
};
use ftl_oracle::equality::{congruence_axioms, equality_as_e};
use ftl_oracle::gen;
use ftl_oracle::model::{equivalent, satisfiable, Signature};
use ftl_oracle::sat::clauses_satisfiable;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Not(g) => matches!(**g, Formula::Atom(_) | Formula::Eq(..)),
        Formula::And(a, b) | Formula::Or(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Forall(_, g) | Formula::Exists(_, g) => is_nnf(g),
        Formula::Implies(..) | Formula::Iff(..) => false,
        _ => true,
    }
}

#[test]
fn brand_example_keeps_satisfiability() {
    let (a, b) = (Term::constant("a"), Term::constant("b"));
    let input = vec![
        Clause::derived(vec![lit("=", vec![a.clone(), b.clone()])]),
        Clause::derived(vec![lit("P", vec![a])]),
        Clause::derived(vec![lit("~P", vec![b])]),
    ];
    assert!(!clauses_satisfiable(&input, 2));
    assert!(!clauses_satisfiable(&brand_transform(&input), 2));
    assert!(brand_transform(&input)
        .iter()
        .all(|c| !c.contains_equality()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nnf_is_equivalent(seed in any::<u64>()) {
        let f = gen::formula(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let g = nnf(&f);
        prop_assert!(is_nnf(&g), "{}", g);
        prop_assert!(equivalent(&f, &g, 3), "{} vs {}", f, g);
    }

    // Skolem functions range over the same domain, so satisfiability agrees
    // size by size.
    #[test]
    fn skolem_cnf_preserves_satisfiability(seed in any::<u64>()) {
        let f = gen::formula(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let cnf = skolemize_cnf(&nnf(&f.rectify()), &mut SkolemCounter::new(), ClauseSource::Derived);
        for n in 1..=2 {
            prop_assert_eq!(satisfiable(&f, n), clauses_satisfiable(&cnf, n), "size {}: {}", n, f);
        }
    }

    #[test]
    fn brand_agrees_with_congruence_axioms(seed in any::<u64>()) {
        let input = gen::equality_clauses(&mut ChaCha8Rng::seed_from_u64(seed));
        let brand = brand_transform(&input);
        let mut axiomatized: Vec<Clause> = input.iter().map(equality_as_e).collect();
        axiomatized.extend(congruence_axioms(&Signature::of_clauses(&input)));
        let expected = clauses_satisfiable(&input, 3);
        prop_assert_eq!(clauses_satisfiable(&axiomatized, 3), expected);
        prop_assert_eq!(clauses_satisfiable(&brand, 3), expected, "{:?}", brand);
    }
}
