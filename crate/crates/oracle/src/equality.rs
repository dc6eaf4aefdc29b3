//! Equality axiomatized explicitly, as the reference for Brand's
//! transformation.

use ftl_core::fol::{Atom, Clause, Literal, Term, BRAND_EQ};

use crate::model::Signature;

/// Equality axioms for `E`: reflexivity, symmetry, transitivity and
/// substitutivity for every function and predicate of `sig`.
pub fn congruence_axioms(sig: &Signature) -> Vec<Clause> {
    let v = |i: usize| Term::var(format!("u{i}"));
    let e = |s: Term, t: Term, pos: bool| {
        let a = Atom::new(BRAND_EQ, vec![s, t]);
        if pos {
            Literal::pos(a)
        } else {
            Literal::neg(a)
        }
    };
    let mut out = vec![
        Clause::derived(vec![e(v(0), v(0), true)]),
        Clause::derived(vec![e(v(0), v(1), false), e(v(1), v(0), true)]),
        Clause::derived(vec![
            e(v(0), v(1), false),
            e(v(1), v(2), false),
            e(v(0), v(2), true),
        ]),
    ];
    for (f, n) in &sig.functions {
        for k in 0..*n {
            let xs: Vec<Term> = (0..*n).map(v).collect();
            let mut ys = xs.clone();
            ys[k] = v(9);
            out.push(Clause::derived(vec![
                e(v(k), v(9), false),
                e(Term::app(f.clone(), xs), Term::app(f.clone(), ys), true),
            ]));
        }
    }
    for (p, n) in &sig.predicates {
        if p == "=" || p == BRAND_EQ {
            continue;
        }
        for k in 0..*n {
            let xs: Vec<Term> = (0..*n).map(v).collect();
            let mut ys = xs.clone();
            ys[k] = v(9);
            out.push(Clause::derived(vec![
                e(v(k), v(9), false),
                Literal::neg(Atom::new(p.clone(), xs)),
                Literal::pos(Atom::new(p.clone(), ys)),
            ]));
        }
    }
    out
}

/// Renames built-in equality to the ordinary predicate `E`.
pub fn equality_as_e(c: &Clause) -> Clause {
    let lits = c
        .literals
        .iter()
        .map(|l| {
            let mut l = l.clone();
            if l.atom.is_equality() {
                l.atom.pred = BRAND_EQ.to_string();
            }
            l
        })
        .collect();
    Clause::derived(lits)
}
