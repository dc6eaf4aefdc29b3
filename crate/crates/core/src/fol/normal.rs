//! Negation normal form, skolemization and clausal form.

use std::collections::BTreeMap;

use super::clause::{Clause, ClauseSource, Literal};
use super::formula::{Atom, Formula, EQUALITY};
use super::term::Term;

/// Source of fresh skolem symbols `sk1, sk2, ...`. Pipelines that run in
/// parallel each own their counter.
#[derive(Debug, Clone, Default)]
pub struct SkolemCounter {
    next: usize,
}

impl SkolemCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> String {
        self.next += 1;
        format!("sk{}", self.next)
    }
}

pub fn is_skolem_symbol(name: &str) -> bool {
    name.strip_prefix("sk")
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

/// Pushes negations down to atoms and eliminates `->` and `<->`.
/// Constants `True`/`False` are simplified away unless the whole formula
/// reduces to one of them.
pub fn nnf(f: &Formula) -> Formula {
    to_nnf(f, true)
}

fn to_nnf(f: &Formula, polarity: bool) -> Formula {
    match f {
        Formula::True => {
            if polarity {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if polarity {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Atom(_) | Formula::Eq(..) => {
            if polarity {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(a) => to_nnf(a, !polarity),
        Formula::And(a, b) => {
            if polarity {
                mk_and(to_nnf(a, true), to_nnf(b, true))
            } else {
                mk_or(to_nnf(a, false), to_nnf(b, false))
            }
        }
        Formula::Or(a, b) => {
            if polarity {
                mk_or(to_nnf(a, true), to_nnf(b, true))
            } else {
                mk_and(to_nnf(a, false), to_nnf(b, false))
            }
        }
        Formula::Implies(a, b) => {
            if polarity {
                mk_or(to_nnf(a, false), to_nnf(b, true))
            } else {
                mk_and(to_nnf(a, true), to_nnf(b, false))
            }
        }
        Formula::Iff(a, b) => {
            if polarity {
                // (~a | b) & (~b | a)
                mk_and(
                    mk_or(to_nnf(a, false), to_nnf(b, true)),
                    mk_or(to_nnf(b, false), to_nnf(a, true)),
                )
            } else {
                // (a & ~b) | (~a & b)
                mk_or(
                    mk_and(to_nnf(a, true), to_nnf(b, false)),
                    mk_and(to_nnf(a, false), to_nnf(b, true)),
                )
            }
        }
        Formula::Forall(v, body) => {
            let inner = to_nnf(body, polarity);
            if polarity {
                mk_quant(true, v, inner)
            } else {
                mk_quant(false, v, inner)
            }
        }
        Formula::Exists(v, body) => {
            let inner = to_nnf(body, polarity);
            if polarity {
                mk_quant(false, v, inner)
            } else {
                mk_quant(true, v, inner)
            }
        }
    }
}

fn mk_and(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::False, _) | (_, Formula::False) => Formula::False,
        (Formula::True, _) => b,
        (_, Formula::True) => a,
        _ => Formula::and(a, b),
    }
}

fn mk_or(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::True, _) | (_, Formula::True) => Formula::True,
        (Formula::False, _) => b,
        (_, Formula::False) => a,
        _ => Formula::or(a, b),
    }
}

fn mk_quant(universal: bool, v: &str, body: Formula) -> Formula {
    match body {
        Formula::True | Formula::False => body,
        _ if universal => Formula::forall(v, body),
        _ => Formula::exists(v, body),
    }
}

/// Clausal form of an NNF, rectified formula. Existentials become skolem
/// terms over the enclosing universals that occur free in their scope;
/// tautologies are dropped and clauses are standardized apart.
pub fn skolemize_cnf(
    f: &Formula,
    skolems: &mut SkolemCounter,
    source: ClauseSource,
) -> Vec<Clause> {
    let matrix = skolemize(f, &mut Vec::new(), &BTreeMap::new(), skolems);
    let mut clauses = Vec::new();
    for lits in cnf(&matrix) {
        let clause = Clause::new(lits, source.clone());
        if !clause.is_tautology() && !clauses.contains(&clause) {
            clauses.push(clause);
        }
    }
    standardize_apart(clauses)
}

/// Full pipeline for an arbitrary closed or open formula: free variables
/// are read universally.
pub fn clausify(f: &Formula, skolems: &mut SkolemCounter, source: ClauseSource) -> Vec<Clause> {
    skolemize_cnf(&nnf(&f.rectify()), skolems, source)
}

fn skolemize(
    f: &Formula,
    universals: &mut Vec<String>,
    env: &BTreeMap<String, Term>,
    skolems: &mut SkolemCounter,
) -> Formula {
    let sub = |t: &Term| super::formula::subst_term(t, env);
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_terms(sub)),
        Formula::Eq(s, t) => Formula::Eq(sub(s), sub(t)),
        Formula::Not(a) if matches!(**a, Formula::Atom(_) | Formula::Eq(..)) => {
            Formula::not(skolemize(a, universals, env, skolems))
        }
        Formula::Not(_) | Formula::Implies(..) | Formula::Iff(..) => {
            skolemize(&nnf(f), universals, env, skolems)
        }
        Formula::And(a, b) => {
            let a = skolemize(a, universals, env, skolems);
            Formula::and(a, skolemize(b, universals, env, skolems))
        }
        Formula::Or(a, b) => {
            let a = skolemize(a, universals, env, skolems);
            Formula::or(a, skolemize(b, universals, env, skolems))
        }
        Formula::Forall(v, body) => {
            let mut env = env.clone();
            env.remove(v);
            universals.push(v.clone());
            let out = skolemize(body, universals, &env, skolems);
            universals.pop();
            out
        }
        Formula::Exists(v, body) => {
            let free = f.free_vars();
            let args: Vec<Term> = universals
                .iter()
                .filter(|u| free.contains(u))
                .map(|u| env.get(u).cloned().unwrap_or_else(|| Term::Var(u.clone())))
                .collect();
            let witness = Term::App(skolems.fresh(), args);
            let mut env = env.clone();
            env.insert(v.clone(), witness);
            skolemize(body, universals, &env, skolems)
        }
    }
}

fn cnf(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => vec![],
        Formula::False => vec![vec![]],
        Formula::Atom(a) => vec![vec![Literal::pos(a.clone())]],
        Formula::Eq(s, t) => vec![vec![Literal::pos(Atom::new(
            EQUALITY,
            vec![s.clone(), t.clone()],
        ))]],
        Formula::Not(inner) => match &**inner {
            Formula::Atom(a) => vec![vec![Literal::neg(a.clone())]],
            Formula::Eq(s, t) => vec![vec![Literal::neg(Atom::new(
                EQUALITY,
                vec![s.clone(), t.clone()],
            ))]],
            other => cnf(&nnf(&Formula::not(other.clone()))),
        },
        Formula::And(a, b) => {
            let mut out = cnf(a);
            out.extend(cnf(b));
            out
        }
        Formula::Or(a, b) => {
            let left = cnf(a);
            let right = cnf(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        Formula::Forall(_, body) => cnf(body),
        Formula::Exists(..) | Formula::Implies(..) | Formula::Iff(..) => cnf(&nnf(f)),
    }
}

/// Renames variables so that no two clauses share one. The first clause
/// using a name keeps it.
pub fn standardize_apart(clauses: Vec<Clause>) -> Vec<Clause> {
    let mut seen: std::collections::BTreeSet<String> = Default::default();
    let mut out = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let vars = clause.vars();
        let mut map = BTreeMap::new();
        for v in &vars {
            let name = super::formula::fresh_name(v, &seen);
            seen.insert(name.clone());
            map.insert(v.clone(), name);
        }
        out.push(clause.rename_vars(|v| map[v].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: Vec<Term>) -> Formula {
        Formula::atom("p", args)
    }

    #[test]
    fn de_morgan() {
        let f = Formula::not(Formula::and(
            Formula::atom("p", vec![]),
            Formula::atom("q", vec![]),
        ));
        assert_eq!(nnf(&f).to_string(), "(~p | ~q)");
    }

    #[test]
    fn quantifier_duality() {
        let f = Formula::not(Formula::forall("x", p(vec![Term::var("x")])));
        assert_eq!(nnf(&f).to_string(), "exists x. ~p(x)");
    }

    #[test]
    fn iff_expansion() {
        let f = Formula::iff(Formula::atom("p", vec![]), Formula::atom("q", vec![]));
        assert_eq!(nnf(&f).to_string(), "((~p | q) & (~q | p))");
    }

    #[test]
    fn one_step_skolemization() {
        let f = Formula::forall(
            "x",
            Formula::exists("y", p(vec![Term::var("x"), Term::var("y")])),
        );
        let cs = skolemize_cnf(&nnf(&f), &mut SkolemCounter::new(), ClauseSource::Derived);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].to_string(), "p(x,sk1(x))");
    }

    #[test]
    fn negated_existential_is_not_skolemized() {
        let q = Formula::exists("x", Formula::atom("q", vec![Term::var("x")]));
        let f = Formula::and(q.clone(), Formula::not(q));
        let cs = skolemize_cnf(&f, &mut SkolemCounter::new(), ClauseSource::Derived);
        let text: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        assert_eq!(text, ["q(sk1)", "~q(x)"]);
    }

    #[test]
    fn ground_skolem_constant() {
        let f = Formula::exists("y", p(vec![Term::var("y")]));
        let cs = skolemize_cnf(&nnf(&f), &mut SkolemCounter::new(), ClauseSource::Derived);
        assert_eq!(cs[0].to_string(), "p(sk1)");
    }

    #[test]
    fn direct_cnf() {
        let f = Formula::forall(
            "x",
            Formula::implies(
                Formula::atom("aSet", vec![Term::var("x")]),
                Formula::atom("aClass", vec![Term::var("x")]),
            ),
        );
        let cs = skolemize_cnf(&nnf(&f), &mut SkolemCounter::new(), ClauseSource::Derived);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].to_string(), "~aSet(x) | aClass(x)");
    }

    #[test]
    fn clauses_are_standardized_apart() {
        let x = Term::var("x");
        let f = Formula::forall(
            "x",
            Formula::and(p(vec![x.clone()]), Formula::atom("q", vec![x])),
        );
        let cs = clausify(&f, &mut SkolemCounter::new(), ClauseSource::Derived);
        assert_eq!(cs.len(), 2);
        assert_ne!(cs[0].vars(), cs[1].vars());
    }

    #[test]
    fn skolem_namespace() {
        assert!(is_skolem_symbol("sk12"));
        assert!(!is_skolem_symbol("sk"));
        assert!(!is_skolem_symbol("skip"));
    }
}
