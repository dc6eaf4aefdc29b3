use std::time::{Duration, Instant};

use ftl_core::bridge::{read, tptp::Role};
use ftl_core::fol::clause::lit;
use ftl_core::fol::{Clause, ClauseSource, Formula, Term};
use ftl_core::prover::{
    check_refutation, clausify_problem, prove, prove_with_stats, CheckResult, ProverConfig, Rule,
    Verdict,
};

fn fixture_dir(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load(path: &std::path::Path) -> (Vec<(String, Formula)>, Formula) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut premises = Vec::new();
    let mut goal = Formula::False;
    for a in read(&text).unwrap() {
        match a.role {
            Role::Axiom => premises.push((a.name, a.formula)),
            Role::Conjecture => goal = a.formula,
        }
    }
    (premises, goal)
}

fn cfg(secs: u64) -> ProverConfig {
    ProverConfig {
        timeout: Duration::from_secs(secs),
        ..ProverConfig::default()
    }
}

fn a() -> Term {
    Term::constant("a")
}

#[test]
fn p_entails_p() {
    let p = Formula::atom("p", vec![]);
    let problem = clausify_problem(&[], &Formula::implies(p.clone(), p));
    let Verdict::Proved(r) = prove(&problem.premises, &problem.goals, &cfg(5)) else {
        panic!()
    };
    assert_eq!(check_refutation(&r), CheckResult::Ok);
    assert_eq!(r.steps.len(), 3);
}

#[test]
fn two_resolution_steps() {
    let x = Term::var("x");
    let premises = vec![
        Clause::new(
            vec![lit("~p", vec![x.clone()]), lit("q", vec![x])],
            ClauseSource::Premise("h1".into()),
        ),
        Clause::new(
            vec![lit("p", vec![a()])],
            ClauseSource::Premise("h2".into()),
        ),
    ];
    let goals = vec![Clause::new(
        vec![lit("~q", vec![a()])],
        ClauseSource::GoalNegation,
    )];
    let Verdict::Proved(r) = prove(&premises, &goals, &cfg(5)) else {
        panic!()
    };
    assert_eq!(check_refutation(&r), CheckResult::Ok);
    let derived = r.steps.iter().filter(|s| s.rule != Rule::Input).count();
    assert_eq!(derived, 2);
}

#[test]
fn unconnected_premise_saturates() {
    let premises = vec![Clause::new(
        vec![lit("p", vec![a()])],
        ClauseSource::Premise("h".into()),
    )];
    let goals = vec![Clause::new(
        vec![lit("~q", vec![a()])],
        ClauseSource::GoalNegation,
    )];
    assert_eq!(prove(&premises, &goals, &cfg(5)), Verdict::Saturated);
}

#[test]
fn weight_cap_never_reports_saturation() {
    let premises = vec![Clause::new(
        vec![lit("p", vec![a()])],
        ClauseSource::Premise("h".into()),
    )];
    let goals = vec![Clause::new(
        vec![lit("~q", vec![a()])],
        ClauseSource::GoalNegation,
    )];
    let capped = ProverConfig {
        max_weight: Some(20),
        ..cfg(5)
    };
    assert_eq!(prove(&premises, &goals, &capped), Verdict::ResourceOut);
}

#[test]
fn tampered_unifier_is_caught() {
    let x = Term::var("x");
    let premises = vec![
        Clause::new(
            vec![lit("~p", vec![x.clone()]), lit("q", vec![x])],
            ClauseSource::Premise("h".into()),
        ),
        Clause::new(vec![lit("p", vec![a()])], ClauseSource::Premise("f".into())),
    ];
    let goals = vec![Clause::new(
        vec![lit("~q", vec![a()])],
        ClauseSource::GoalNegation,
    )];
    let Verdict::Proved(mut r) = prove(&premises, &goals, &cfg(5)) else {
        panic!()
    };
    let (id, step) = r
        .steps
        .iter_mut()
        .find_map(|s| match &mut s.rule {
            Rule::Resolution { unifier, .. } if !unifier.is_empty() => Some((s.id, unifier)),
            _ => None,
        })
        .unwrap();
    let var = step.iter().next().unwrap().0.clone();
    step.insert_raw(var, Term::constant("zzz"));
    assert_eq!(check_refutation(&r), CheckResult::BadStep(id));
}

#[test]
fn input_only_refutation_is_rejected() {
    let problem = clausify_problem(&[], &Formula::atom("p", vec![]));
    let r = ftl_core::prover::Refutation {
        steps: vec![ftl_core::prover::Step {
            id: 0,
            rule: Rule::Input,
            clause: problem.goals[0].clone(),
        }],
    };
    assert_eq!(check_refutation(&r), CheckResult::BadStep(0));
}

#[test]
fn first_order_suite() {
    let mut names: Vec<_> = std::fs::read_dir(fixture_dir("fo"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    assert!(names.len() >= 20);
    for path in names {
        let (premises, goal) = load(&path);
        let problem = clausify_problem(&premises, &goal);
        let start = Instant::now();
        let verdict = prove(&problem.premises, &problem.goals, &cfg(5));
        let Verdict::Proved(r) = verdict else {
            panic!("{}: {verdict:?}", path.display());
        };
        assert!(
            start.elapsed() < Duration::from_secs(5),
            "{}",
            path.display()
        );
        assert_eq!(check_refutation(&r), CheckResult::Ok, "{}", path.display());
    }
}

/// lt(a1,a2), ..., lt(a(n-1),an) ⊢ lt(a1,an)
fn chain_family(n: usize, with_axiom: bool) -> (Vec<(String, Formula)>, Formula) {
    let c = |i: usize| Term::constant(format!("a{i}"));
    let lt = |s: Term, t: Term| Formula::atom("lt", vec![s, t]);
    let mut premises: Vec<(String, Formula)> = (1..n)
        .map(|i| (format!("h{i}"), lt(c(i), c(i + 1))))
        .collect();
    if with_axiom {
        let v = |s: &str| Term::var(s);
        let trans = Formula::implies(
            Formula::and(lt(v("x"), v("y")), lt(v("y"), v("z"))),
            lt(v("x"), v("z")),
        );
        premises.push(("transitivity".into(), trans.universal_closure()));
    }
    (premises, lt(c(1), c(n)))
}

#[test]
fn chaining_retains_fewer_clauses() {
    let (with, goal) = chain_family(8, true);
    let (without, _) = chain_family(8, false);
    let axiom_side = clausify_problem(&with, &goal);
    let chain_side = clausify_problem(&without, &goal);
    let off = prove_with_stats(&axiom_side.premises, &axiom_side.goals, &cfg(10));
    let on_cfg = ProverConfig {
        chaining: vec!["lt".into()],
        ..cfg(10)
    };
    let on = prove_with_stats(&chain_side.premises, &chain_side.goals, &on_cfg);
    assert!(off.verdict.is_proved() && on.verdict.is_proved());
    assert!(
        on.stats.retained < off.stats.retained,
        "{:?} vs {:?}",
        on.stats,
        off.stats
    );
    if let Verdict::Proved(r) = &on.verdict {
        assert_eq!(check_refutation(r), CheckResult::Ok);
    }
}

mod random {
    use super::*;
    use ftl_oracle::gen::propositional_clauses;
    use ftl_oracle::sat::truth_table_satisfiable;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Ground clause sets: Proved iff the truth table finds no model,
        // Saturated otherwise. Every clause counts as a goal here.
        #[test]
        fn ground_verdict_matches_truth_table(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let clauses = propositional_clauses(&mut rng, 6, 12, 3);
            let verdict = prove(&[], &clauses, &cfg(10));
            if truth_table_satisfiable(&clauses) {
                prop_assert_eq!(verdict, Verdict::Saturated);
            } else {
                let Verdict::Proved(r) = verdict else { return Err(TestCaseError::fail("not proved")) };
                prop_assert_eq!(check_refutation(&r), CheckResult::Ok);
            }
        }
    }

    #[test]
    fn search_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let clauses = propositional_clauses(&mut rng, 5, 10, 3);
            let a = prove_with_stats(&[], &clauses, &cfg(10));
            let b = prove_with_stats(&[], &clauses, &cfg(10));
            assert_eq!(a, b);
        }
    }
}
