//! Equality elimination by Brand's modification.
//!
//! Each clause is flattened, positive equations are expanded into both
//! orientations (symmetry) and rewritten as `t != z | s = z` (transitivity).
//! Equality then becomes an ordinary binary predicate [`BRAND_EQ`] and a
//! single reflexivity clause is added. The result is satisfiable iff the
//! input is satisfiable with equality read as identity.

use std::collections::{BTreeMap, BTreeSet};

use super::clause::{Clause, ClauseSource, Literal};
use super::formula::{fresh_name, Atom, EQUALITY};
use super::term::Term;

/// The ordinary predicate that replaces built-in equality.
pub const BRAND_EQ: &str = "E";

pub fn brand_transform(clauses: &[Clause]) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    let any_equality = clauses.iter().any(Clause::contains_equality);
    for clause in clauses {
        if !any_equality {
            out.push(clause.clone());
            continue;
        }
        for c in modify(clause) {
            let c = rename_equality(&c);
            if !c.is_tautology() && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.push(Clause::new(
        vec![Literal::pos(Atom::new(
            BRAND_EQ,
            vec![Term::var("x"), Term::var("x")],
        ))],
        ClauseSource::Premise("reflexivity".into()),
    ));
    out
}

fn modify(clause: &Clause) -> Vec<Clause> {
    let flat = flatten(clause);
    let mut variants = Vec::new();
    for sym in symmetric_variants(&flat) {
        variants.push(transitivity(&sym));
    }
    variants
}

fn eq_atom(s: Term, t: Term) -> Atom {
    Atom::new(EQUALITY, vec![s, t])
}

struct Flattener {
    used: BTreeSet<String>,
    memo: BTreeMap<Term, Term>,
    extra: Vec<Literal>,
}

impl Flattener {
    fn fresh(&mut self) -> Term {
        let name = fresh_name("z", &self.used);
        self.used.insert(name.clone());
        Term::Var(name)
    }

    /// Replaces `t` by a variable, emitting `f(u) != z` for non-variables.
    fn abstract_term(&mut self, t: &Term) -> Term {
        if t.is_var() {
            return t.clone();
        }
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let top = self.flatten_top(t);
        let z = self.fresh();
        self.extra.push(Literal::neg(eq_atom(top, z.clone())));
        self.memo.insert(t.clone(), z.clone());
        z
    }

    /// `f(t1..tn)` with every argument abstracted to a variable.
    fn flatten_top(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| self.abstract_term(a)).collect(),
            ),
        }
    }
}

fn flatten(clause: &Clause) -> Clause {
    let mut fl = Flattener {
        used: clause.vars().into_iter().collect(),
        memo: BTreeMap::new(),
        extra: Vec::new(),
    };
    let mut lits = Vec::new();
    for lit in &clause.literals {
        let atom = &lit.atom;
        let new_atom = if atom.is_equality() {
            let (s, t) = (&atom.args[0], &atom.args[1]);
            match (s.is_var(), t.is_var()) {
                (true, true) => atom.clone(),
                (false, true) => eq_atom(fl.flatten_top(s), t.clone()),
                (true, false) => eq_atom(fl.flatten_top(t), s.clone()),
                (false, false) => {
                    let z = fl.abstract_term(t);
                    eq_atom(fl.flatten_top(s), z)
                }
            }
        } else {
            Atom::new(
                atom.pred.clone(),
                atom.args.iter().map(|a| fl.abstract_term(a)).collect(),
            )
        };
        lits.push(Literal {
            positive: lit.positive,
            atom: new_atom,
        });
    }
    lits.extend(fl.extra);
    Clause::new(lits, clause.source.clone())
}

fn symmetric_variants(clause: &Clause) -> Vec<Clause> {
    let positions: Vec<usize> = clause
        .literals
        .iter()
        .enumerate()
        .filter(|(_, l)| l.positive && l.atom.is_equality())
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << positions.len()) {
        let mut lits = clause.literals.clone();
        for (bit, &i) in positions.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                lits[i].atom.args.swap(0, 1);
            }
        }
        let c = Clause::new(lits, clause.source.clone());
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn transitivity(clause: &Clause) -> Clause {
    let mut used: BTreeSet<String> = clause.vars().into_iter().collect();
    let mut lits = Vec::new();
    for lit in &clause.literals {
        if lit.positive && lit.atom.is_equality() {
            let name = fresh_name("z", &used);
            used.insert(name.clone());
            let z = Term::Var(name);
            let (s, t) = (lit.atom.args[0].clone(), lit.atom.args[1].clone());
            lits.push(Literal::neg(eq_atom(t, z.clone())));
            lits.push(Literal::pos(eq_atom(s, z)));
        } else {
            lits.push(lit.clone());
        }
    }
    Clause::new(lits, clause.source.clone())
}

/// Equality as a plain predicate with reflexivity, symmetry, transitivity
/// and substitutivity for predicates, but no function congruence. Sound
/// but incomplete: refutations of the result are refutations of the input.
pub fn uninterpreted_equality(clauses: &[Clause]) -> Vec<Clause> {
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    let eq = |a: &Term, b: &Term| Atom::new(BRAND_EQ, vec![a.clone(), b.clone()]);
    let mut out: Vec<Clause> = clauses.iter().map(rename_equality).collect();
    let axiom = |literals, name: &str| Clause::new(literals, ClauseSource::Premise(name.into()));
    let mut extra = vec![
        axiom(vec![Literal::pos(eq(&x, &x))], "reflexivity"),
        axiom(
            vec![Literal::neg(eq(&x, &y)), Literal::pos(eq(&y, &x))],
            "symmetry",
        ),
        axiom(
            vec![
                Literal::neg(eq(&x, &y)),
                Literal::neg(eq(&y, &z)),
                Literal::pos(eq(&x, &z)),
            ],
            "transitivity",
        ),
    ];
    let predicates: BTreeSet<(String, usize)> = out
        .iter()
        .flat_map(|c| {
            c.literals
                .iter()
                .map(|l| (l.atom.pred.clone(), l.atom.args.len()))
        })
        .filter(|(p, _)| p != BRAND_EQ)
        .collect();
    for (p, arity) in predicates {
        let args: Vec<Term> = (0..arity).map(|i| Term::var(format!("a{i}"))).collect();
        for k in 0..arity {
            let mut moved = args.clone();
            moved[k] = y.clone();
            let literals = vec![
                Literal::neg(eq(&args[k], &y)),
                Literal::neg(Atom::new(p.clone(), args.clone())),
                Literal::pos(Atom::new(p.clone(), moved)),
            ];
            extra.push(axiom(literals, &format!("substitution_{p}_{}", k + 1)));
        }
    }
    out.extend(extra);
    out
}

fn rename_equality(clause: &Clause) -> Clause {
    Clause::new(
        clause
            .literals
            .iter()
            .map(|l| {
                let mut l = l.clone();
                if l.atom.is_equality() {
                    l.atom.pred = BRAND_EQ.to_string();
                }
                l
            })
            .collect(),
        clause.source.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::clause::lit;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn no_equality_only_adds_reflexivity() {
        let input = vec![Clause::derived(vec![
            lit("p", vec![Term::var("x")]),
            lit("~q", vec![Term::var("x")]),
        ])];
        let out = brand_transform(&input);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0], input[0]);
        assert_eq!(out[1].to_string(), "E(x,x)");
    }

    #[test]
    fn output_is_equality_free_and_flat() {
        let input = vec![Clause::derived(vec![Literal::pos(eq_atom(
            Term::app("f", vec![c("a")]),
            c("a"),
        ))])];
        let out = brand_transform(&input);
        for clause in &out {
            assert!(!clause.contains_equality(), "{clause}");
            for l in &clause.literals {
                for t in &l.atom.args {
                    if let Term::App(_, args) = t {
                        assert!(args.iter().all(Term::is_var), "nested term in {clause}");
                    }
                }
            }
        }
    }
}
