//! Single inference steps. Both the prover and the refutation checker build
//! conclusions through these functions, so a recorded step re-derives to
//! exactly the stored clause.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fol::formula::{fresh_name, Atom};
use crate::fol::unify::{unify_atoms, unify_into, UnifyError};
use crate::fol::{Clause, Literal, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("literals have the wrong signs")]
    Sign,
    #[error("literal index out of range")]
    Index,
    #[error("not a binary `{0}` literal")]
    Relation(String),
    #[error(transparent)]
    Unify(#[from] UnifyError),
}

/// Which form of the chaining rule was applied. With `R` transitive:
/// `Forward`: R(s,t), R(t',u) gives R(s,u);
/// `Left`: ~R(s,u), R(s',t) gives ~R(t,u);
/// `Right`: ~R(s,u), R(t,u') gives ~R(s,t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Forward,
    Left,
    Right,
}

/// Renames the variables of `second` away from those of `first`. The
/// result depends only on the two clauses.
pub fn rename_apart(first: &Clause, second: &Clause) -> Clause {
    let mut used: BTreeSet<String> = first.vars().into_iter().collect();
    let theirs = second.vars();
    used.extend(theirs.iter().cloned());
    let taken: BTreeSet<String> = first.vars().into_iter().collect();
    let mut map = std::collections::BTreeMap::new();
    for v in theirs {
        if taken.contains(&v) {
            let n = fresh_name(&format!("{v}_1"), &used);
            used.insert(n.clone());
            map.insert(v, n);
        }
    }
    second.rename_vars(|v| map.get(v).cloned().unwrap_or_else(|| v.to_string()))
}

fn rest<'a>(
    c: &'a Clause,
    skip: usize,
    sub: &'a Substitution,
) -> impl Iterator<Item = Literal> + 'a {
    c.literals
        .iter()
        .enumerate()
        .filter(move |(k, _)| *k != skip)
        .map(move |(_, l)| l.apply(sub))
}

fn literal(c: &Clause, i: usize) -> Result<&Literal, InferenceError> {
    c.literals.get(i).ok_or(InferenceError::Index)
}

/// Resolvent of `c1` and the renamed `c2` on literals `i` and `j` under `sub`.
pub fn resolvent_under(
    c1: &Clause,
    i: usize,
    c2r: &Clause,
    j: usize,
    sub: &Substitution,
) -> Clause {
    let lits: Vec<Literal> = rest(c1, i, sub).chain(rest(c2r, j, sub)).collect();
    Clause::derived(lits).normalized()
}

/// Binary resolution. Returns the normalized resolvent and the unifier,
/// which refers to `c1` and `rename_apart(c1, c2)`.
pub fn resolve(
    c1: &Clause,
    c2: &Clause,
    i: usize,
    j: usize,
) -> Result<(Clause, Substitution), InferenceError> {
    resolve_renamed(c1, &rename_apart(c1, c2), i, j)
}

/// [`resolve`] with `c2r = rename_apart(c1, c2)` already computed.
pub fn resolve_renamed(
    c1: &Clause,
    c2r: &Clause,
    i: usize,
    j: usize,
) -> Result<(Clause, Substitution), InferenceError> {
    let (a, b) = (literal(c1, i)?, literal(c2r, j)?);
    if a.positive == b.positive {
        return Err(InferenceError::Sign);
    }
    let sub = unify_atoms(&a.atom, &b.atom)?;
    Ok((resolvent_under(c1, i, c2r, j, &sub), sub))
}

pub fn factor_under(c: &Clause, sub: &Substitution) -> Clause {
    c.apply(sub)
        .with_source(crate::fol::ClauseSource::Derived)
        .normalized()
}

/// Positive or negative factoring of literals `i` and `j`.
pub fn factor(c: &Clause, i: usize, j: usize) -> Result<(Clause, Substitution), InferenceError> {
    let (a, b) = (literal(c, i)?, literal(c, j)?);
    if a.positive != b.positive || i == j {
        return Err(InferenceError::Sign);
    }
    let sub = unify_atoms(&a.atom, &b.atom)?;
    Ok((factor_under(c, &sub), sub))
}

fn binary<'a>(
    l: &'a Literal,
    rel: &str,
) -> Result<(&'a crate::fol::Term, &'a crate::fol::Term), InferenceError> {
    match l.atom.args.as_slice() {
        [s, t] if l.atom.pred == rel => Ok((s, t)),
        _ => Err(InferenceError::Relation(rel.to_string())),
    }
}

/// The terms to unify and the new literal for a chaining step, before the
/// unifier is applied.
fn chain_parts(
    a: &Literal,
    b: &Literal,
    rel: &str,
    kind: ChainKind,
) -> Result<((crate::fol::Term, crate::fol::Term), Literal), InferenceError> {
    let (s, t) = binary(a, rel)?;
    let (s2, t2) = binary(b, rel)?;
    let atom =
        |x: &crate::fol::Term, y: &crate::fol::Term| Atom::new(rel, vec![x.clone(), y.clone()]);
    match kind {
        ChainKind::Forward if a.positive && b.positive => {
            Ok(((t.clone(), s2.clone()), Literal::pos(atom(s, t2))))
        }
        ChainKind::Left if !a.positive && b.positive => {
            Ok(((s.clone(), s2.clone()), Literal::neg(atom(t2, t))))
        }
        ChainKind::Right if !a.positive && b.positive => {
            Ok(((t.clone(), t2.clone()), Literal::neg(atom(s, s2))))
        }
        _ => Err(InferenceError::Sign),
    }
}

pub fn chain_under(
    c1: &Clause,
    i: usize,
    c2r: &Clause,
    j: usize,
    rel: &str,
    kind: ChainKind,
    sub: &Substitution,
) -> Result<Clause, InferenceError> {
    let (_, new) = chain_parts(literal(c1, i)?, literal(c2r, j)?, rel, kind)?;
    let mut lits: Vec<Literal> = rest(c1, i, sub).chain(rest(c2r, j, sub)).collect();
    lits.push(new.apply(sub));
    Ok(Clause::derived(lits).normalized())
}

/// Chaining on a transitive relation `rel`, replacing its transitivity
/// axiom. Literal `i` of `c1` and `j` of `c2` take the roles described in
/// [`ChainKind`].
pub fn chain(
    c1: &Clause,
    c2: &Clause,
    i: usize,
    j: usize,
    rel: &str,
    kind: ChainKind,
) -> Result<(Clause, Substitution), InferenceError> {
    chain_renamed(c1, &rename_apart(c1, c2), i, j, rel, kind)
}

/// [`chain`] with `c2r = rename_apart(c1, c2)` already computed.
pub fn chain_renamed(
    c1: &Clause,
    c2r: &Clause,
    i: usize,
    j: usize,
    rel: &str,
    kind: ChainKind,
) -> Result<(Clause, Substitution), InferenceError> {
    let ((x, y), _) = chain_parts(literal(c1, i)?, literal(c2r, j)?, rel, kind)?;
    let mut sub = Substitution::new();
    unify_into(&x, &y, &mut sub)?;
    let out = chain_under(c1, i, c2r, j, rel, kind, &sub)?;
    Ok((out, sub))
}

/// Whether `sub` unifies the chaining terms of a recorded step.
pub fn chain_unifies(
    c1: &Clause,
    i: usize,
    c2r: &Clause,
    j: usize,
    rel: &str,
    kind: ChainKind,
    sub: &Substitution,
) -> bool {
    match chain_parts(&c1.literals[i], &c2r.literals[j], rel, kind) {
        Ok(((x, y), _)) => sub.apply(&x) == sub.apply(&y),
        Err(_) => false,
    }
}

type Bindings<'a> = Vec<(&'a str, &'a Term)>;

/// One-way matching with borrowed bindings; on failure the bindings may
/// hold partial entries, which the caller truncates away.
fn match_term<'a>(p: &'a Term, t: &'a Term, binds: &mut Bindings<'a>) -> bool {
    match p {
        Term::Var(v) => match binds.iter().find(|(w, _)| *w == v.as_str()) {
            Some((_, bound)) => *bound == t,
            None => {
                binds.push((v.as_str(), t));
                true
            }
        },
        Term::App(f, fs) => match t {
            Term::App(g, gs) => {
                f == g
                    && fs.len() == gs.len()
                    && fs.iter().zip(gs).all(|(a, b)| match_term(a, b, binds))
            }
            Term::Var(_) => false,
        },
    }
}

fn match_literal<'a>(p: &'a Literal, t: &'a Literal, binds: &mut Bindings<'a>) -> bool {
    let mark = binds.len();
    let ok = p.positive == t.positive
        && p.atom.pred == t.atom.pred
        && p.atom.args.len() == t.atom.args.len()
        && p.atom
            .args
            .iter()
            .zip(&t.atom.args)
            .all(|(a, b)| match_term(a, b, binds));
    if !ok {
        binds.truncate(mark);
    }
    ok
}

/// `c` subsumes `d` when some substitution maps every literal of `c` onto a
/// literal of `d`. Variables of `d` are treated as constants, so the two
/// clauses may share variable names.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    // cheap necessary condition: each literal matches some literal alone
    let mut binds: Bindings = Vec::new();
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(c.len());
    for l in &c.literals {
        let mut found = Vec::new();
        for (k, t) in d.literals.iter().enumerate() {
            if match_literal(l, t, &mut binds) {
                found.push(k);
            }
            binds.clear();
        }
        if found.is_empty() {
            return false;
        }
        candidates.push(found);
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by_key(|&i| candidates[i].len());
    fn go<'a>(
        order: &[usize],
        c: &'a Clause,
        d: &'a Clause,
        candidates: &[Vec<usize>],
        binds: &mut Bindings<'a>,
    ) -> bool {
        let Some((&first, more)) = order.split_first() else {
            return true;
        };
        candidates[first].iter().any(|&k| {
            let mark = binds.len();
            if match_literal(&c.literals[first], &d.literals[k], binds)
                && go(more, c, d, candidates, binds)
            {
                return true;
            }
            binds.truncate(mark);
            false
        })
    }
    go(&order, c, d, &candidates, &mut binds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::clause::lit;
    use crate::fol::Term;

    fn x() -> Term {
        Term::var("x")
    }
    fn k(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn textbook_resolution() {
        let c1 = Clause::derived(vec![lit("~p", vec![x()]), lit("q", vec![x()])]);
        let c2 = Clause::derived(vec![lit("p", vec![k("a")])]);
        let (r, _) = resolve(&c1, &c2, 0, 0).unwrap();
        assert_eq!(r.to_string(), "q(a)");
    }

    #[test]
    fn same_sign_fails() {
        let c1 = Clause::derived(vec![lit("p", vec![x()])]);
        let c2 = Clause::derived(vec![lit("p", vec![k("a")])]);
        assert_eq!(resolve(&c1, &c2, 0, 0), Err(InferenceError::Sign));
    }

    #[test]
    fn renaming_apart_gives_the_empty_clause() {
        let c1 = Clause::derived(vec![lit("~p", vec![Term::app("f", vec![x()])])]);
        let c2 = Clause::derived(vec![lit("p", vec![x()])]);
        let (r, sub) = resolve(&c1, &c2, 0, 0).unwrap();
        assert!(r.is_empty());
        assert_eq!(sub.to_string(), "{x_1->f(x)}");
    }

    #[test]
    fn ground_chaining() {
        let c1 = Clause::derived(vec![lit("lt", vec![k("a"), k("b")])]);
        let c2 = Clause::derived(vec![lit("lt", vec![k("b"), k("c")])]);
        let (r, _) = chain(&c1, &c2, 0, 0, "lt", ChainKind::Forward).unwrap();
        assert_eq!(r.to_string(), "lt(a,c)");
    }

    #[test]
    fn chaining_needs_a_meeting_point() {
        let c1 = Clause::derived(vec![lit("lt", vec![k("a"), k("b")])]);
        let c2 = Clause::derived(vec![lit("lt", vec![k("c"), k("d")])]);
        assert!(matches!(
            chain(&c1, &c2, 0, 0, "lt", ChainKind::Forward),
            Err(InferenceError::Unify(_))
        ));
    }

    #[test]
    fn chaining_keeps_side_literals() {
        let c1 = Clause::derived(vec![lit("~p", vec![x()]), lit("lt", vec![x(), k("b")])]);
        let c2 = Clause::derived(vec![lit("lt", vec![k("b"), k("c")])]);
        let (r, _) = chain(&c1, &c2, 1, 0, "lt", ChainKind::Forward).unwrap();
        assert_eq!(r.to_string(), "~p(X0) | lt(X0,c)");
    }

    #[test]
    fn negative_chaining() {
        // ~lt(a,c) with lt(a,b) leaves ~lt(b,c); with lt(b,c) leaves ~lt(a,b)
        let goal = Clause::derived(vec![lit("~lt", vec![k("a"), k("c")])]);
        let ab = Clause::derived(vec![lit("lt", vec![k("a"), k("b")])]);
        let bc = Clause::derived(vec![lit("lt", vec![k("b"), k("c")])]);
        assert_eq!(
            chain(&goal, &ab, 0, 0, "lt", ChainKind::Left)
                .unwrap()
                .0
                .to_string(),
            "~lt(b,c)"
        );
        assert_eq!(
            chain(&goal, &bc, 0, 0, "lt", ChainKind::Right)
                .unwrap()
                .0
                .to_string(),
            "~lt(a,b)"
        );
    }

    #[test]
    fn subsumption() {
        let general = Clause::derived(vec![lit("p", vec![x()])]);
        let special = Clause::derived(vec![lit("p", vec![k("a")]), lit("q", vec![k("b")])]);
        assert!(subsumes(&general, &special));
        assert!(!subsumes(&special, &general));
        let pxx = Clause::derived(vec![lit("p", vec![x(), x()])]);
        let pxy = Clause::derived(vec![lit("p", vec![x(), Term::var("y")])]);
        assert!(!subsumes(&pxx, &pxy));
        assert!(subsumes(&pxy, &pxx));
    }
}
