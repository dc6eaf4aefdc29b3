//! Seeded random generators for formulas and clause sets.

use rand::seq::SliceRandom;
use rand::Rng;

use ftl_core::fol::clause::lit;
use ftl_core::fol::{Clause, Formula, Literal, Term};

fn term(rng: &mut impl Rng, vars: &[String], depth: usize) -> Term {
    let choice = rng.gen_range(0..4);
    if depth > 0 && choice == 0 {
        return Term::app("f", vec![term(rng, vars, depth - 1)]);
    }
    if !vars.is_empty() && choice < 3 {
        return Term::var(vars.choose(rng).unwrap().clone());
    }
    Term::constant("c")
}

/// A random formula over predicates `P/1`, `Q/1` and functions `c/0`,
/// `f/1`, with connective depth at most `depth`. Variables are bound by
/// enclosing quantifiers, so the result is closed.
pub fn formula(rng: &mut impl Rng, depth: usize) -> Formula {
    fn go(rng: &mut impl Rng, depth: usize, bound: &mut Vec<String>) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 5) {
            let p = if rng.gen() { "P" } else { "Q" };
            return Formula::atom(p, vec![term(rng, bound, 1)]);
        }
        match rng.gen_range(0..7) {
            0 => Formula::not(go(rng, depth - 1, bound)),
            1 => Formula::and(go(rng, depth - 1, bound), go(rng, depth - 1, bound)),
            2 => Formula::or(go(rng, depth - 1, bound), go(rng, depth - 1, bound)),
            3 => Formula::implies(go(rng, depth - 1, bound), go(rng, depth - 1, bound)),
            4 => Formula::iff(go(rng, depth - 1, bound), go(rng, depth - 1, bound)),
            k => {
                let v = if bound.contains(&"x".to_string()) {
                    "y"
                } else {
                    "x"
                }
                .to_string();
                bound.push(v.clone());
                let body = go(rng, depth - 1, bound);
                bound.pop();
                if k == 5 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }
    go(rng, depth, &mut Vec::new())
}

/// Random clauses over the 0-ary atoms `p0..p{atoms-1}`.
pub fn propositional_clauses(
    rng: &mut impl Rng,
    atoms: usize,
    clauses: usize,
    max_len: usize,
) -> Vec<Clause> {
    (0..clauses)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let lits: Vec<Literal> = (0..len)
                .map(|_| {
                    let name = format!("p{}", rng.gen_range(0..atoms));
                    let sign = if rng.gen() { "" } else { "~" };
                    lit(&format!("{sign}{name}"), vec![])
                })
                .collect();
            Clause::derived(lits)
        })
        .collect()
}

/// A small clause set with equality over constants `a`, `b`, function
/// `f/1` and predicate `P/1`; some clauses carry the variable `x`.
pub fn equality_clauses(rng: &mut impl Rng) -> Vec<Clause> {
    let n = rng.gen_range(2..=4);
    (0..n)
        .map(|_| {
            let vars: Vec<String> = if rng.gen_ratio(1, 3) {
                vec!["x".into()]
            } else {
                vec![]
            };
            let t = |rng: &mut _| -> Term {
                let base = match rng_choice(rng, 3) {
                    0 => Term::constant("a"),
                    1 => Term::constant("b"),
                    _ if !vars.is_empty() => Term::var("x"),
                    _ => Term::constant("a"),
                };
                if rng_choice(rng, 3) == 0 {
                    Term::app("f", vec![base])
                } else {
                    base
                }
            };
            let len = rng.gen_range(1..=2);
            let lits: Vec<Literal> = (0..len)
                .map(|_| {
                    let sign = if rng.gen_ratio(2, 3) { "" } else { "~" };
                    if rng.gen() {
                        let (s, u) = (t(rng), t(rng));
                        lit(&format!("{sign}="), vec![s, u])
                    } else {
                        lit(&format!("{sign}P"), vec![t(rng)])
                    }
                })
                .collect();
            Clause::derived(lits)
        })
        .collect()
}

fn rng_choice(rng: &mut impl Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}
