//! Syntactic unification and one-way matching.

use thiserror::Error;

use super::formula::Atom;
use super::term::{Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("symbol clash: {0} vs {1}")]
    Clash(String, String),
    #[error("occurs check: {0} occurs in {1}")]
    OccursCheck(String, String),
}

/// Most general unifier of two terms (Robinson, with occurs check).
pub fn unify(s: &Term, t: &Term) -> Result<Substitution, UnifyError> {
    let mut sub = Substitution::new();
    unify_into(s, t, &mut sub)?;
    Ok(sub)
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Result<Substitution, UnifyError> {
    let mut sub = Substitution::new();
    unify_atoms_into(a, b, &mut sub)?;
    Ok(sub)
}

/// Extends `sub` to also unify `a` and `b`.
pub fn unify_atoms_into(a: &Atom, b: &Atom, sub: &mut Substitution) -> Result<(), UnifyError> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return Err(UnifyError::Clash(
            format!("{}/{}", a.pred, a.args.len()),
            format!("{}/{}", b.pred, b.args.len()),
        ));
    }
    for (s, t) in a.args.iter().zip(&b.args) {
        unify_into(s, t, sub)?;
    }
    Ok(())
}

pub fn unify_into(s: &Term, t: &Term, sub: &mut Substitution) -> Result<(), UnifyError> {
    let mut pending = vec![(s.clone(), t.clone())];
    while let Some((s, t)) = pending.pop() {
        let s = sub.apply(&s);
        let t = sub.apply(&t);
        match (&s, &t) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.occurs(x) {
                    return Err(UnifyError::OccursCheck(x.clone(), other.to_string()));
                }
                sub.bind(x, other.clone());
            }
            (Term::App(f, fs), Term::App(g, gs)) => {
                if f != g || fs.len() != gs.len() {
                    return Err(UnifyError::Clash(f.clone(), g.clone()));
                }
                pending.extend(fs.iter().cloned().zip(gs.iter().cloned()).rev());
            }
        }
    }
    Ok(())
}

/// One-way matching: finds `sub` extending the given one with
/// `pattern·sub == target`, binding only variables of `pattern`.
pub fn match_term(pattern: &Term, target: &Term, sub: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match sub.get(v) {
            Some(bound) => bound == target,
            None => {
                sub.insert_raw(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, fs) => match target {
            Term::App(g, gs) if f == g && fs.len() == gs.len() => {
                fs.iter().zip(gs).all(|(p, t)| match_term(p, t, sub))
            }
            _ => false,
        },
    }
}

pub fn match_atom(pattern: &Atom, target: &Atom, sub: &mut Substitution) -> bool {
    pattern.pred == target.pred
        && pattern.args.len() == target.args.len()
        && pattern
            .args
            .iter()
            .zip(&target.args)
            .all(|(p, t)| match_term(p, t, sub))
}
