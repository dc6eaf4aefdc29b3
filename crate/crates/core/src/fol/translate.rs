//! First-order images of statements. Every quantifier is relativized by
//! the predicates of its notion phrase.

use thiserror::Error;

use super::formula::Formula;
use super::term::Term;
use crate::syntax::{NotionPhrase, Quantifier, Statement, SurfaceTerm, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("variable `{0}` escapes its binder")]
    UnboundVariable(String),
}

pub fn term(t: &SurfaceTerm, vocab: &Vocabulary) -> Term {
    match t {
        SurfaceTerm::Var(v) => Term::var(v.clone()),
        SurfaceTerm::App(id, args) => Term::app(
            vocab.pattern(*id).symbol.clone(),
            args.iter().map(|a| term(a, vocab)).collect(),
        ),
    }
}

/// `aN(t, args) ∧ isAdj(t) ∧ ...` for a notion phrase applied to `subject`.
pub fn notion_guard(np: &NotionPhrase, subject: Term, vocab: &Vocabulary) -> Formula {
    let mut args = vec![subject.clone()];
    args.extend(np.args.iter().map(|a| term(a, vocab)));
    let mut parts = vec![Formula::atom(vocab.pattern(np.notion).symbol.clone(), args)];
    for adj in &np.adjectives {
        parts.push(Formula::atom(
            vocab.pattern(*adj).symbol.clone(),
            vec![subject.clone()],
        ));
    }
    Formula::conjunction(parts)
}

/// Translates a statement, keeping its free variables free.
pub fn translate(stmt: &Statement, vocab: &Vocabulary) -> Formula {
    match stmt {
        Statement::Quantified {
            quantifier,
            notion,
            scope,
        } => {
            let var = notion.var.clone().expect("parsed quantifiers are named");
            let guard = notion_guard(notion, Term::var(var.clone()), vocab);
            let body = translate(scope, vocab);
            match quantifier {
                Quantifier::Every => Formula::forall(var, Formula::implies(guard, body)),
                Quantifier::Some => Formula::exists(var, Formula::and(guard, body)),
                Quantifier::No => Formula::not(Formula::exists(var, Formula::and(guard, body))),
            }
        }
        Statement::Predicate { pattern, args } => Formula::atom(
            vocab.pattern(*pattern).symbol.clone(),
            args.iter().map(|a| term(a, vocab)).collect(),
        ),
        Statement::IsNotion { subject, notion } => {
            notion_guard(notion, term(subject, vocab), vocab)
        }
        Statement::HasAdjective {
            subject,
            adjective,
            args,
        } => {
            let mut all = vec![term(subject, vocab)];
            all.extend(args.iter().map(|a| term(a, vocab)));
            Formula::atom(vocab.pattern(*adjective).symbol.clone(), all)
        }
        Statement::Relation { symbol, lhs, rhs } => {
            let (l, r) = (term(lhs, vocab), term(rhs, vocab));
            match symbol.as_str() {
                "=" => Formula::Eq(l, r),
                "!=" => Formula::not(Formula::Eq(l, r)),
                _ => Formula::atom(symbol.clone(), vec![l, r]),
            }
        }
        Statement::And(a, b) => Formula::and(translate(a, vocab), translate(b, vocab)),
        Statement::Or(a, b) => Formula::or(translate(a, vocab), translate(b, vocab)),
        Statement::Implies(a, b) => Formula::implies(translate(a, vocab), translate(b, vocab)),
        Statement::Iff(a, b) => Formula::iff(translate(a, vocab), translate(b, vocab)),
        Statement::Not(a) => Formula::not(translate(a, vocab)),
    }
}

/// Translates and closes over the free variables. Variables declared with
/// `Let` are universally closed under their notion guard, in order of first
/// occurrence; any other free variable not listed in `allowed` is an error.
pub fn translate_closed(
    stmt: &Statement,
    vocab: &Vocabulary,
    allowed: &[String],
) -> Result<Formula, TranslateError> {
    let f = translate(stmt, vocab);
    close_declared(f, vocab, allowed)
}

pub fn close_declared(
    f: Formula,
    vocab: &Vocabulary,
    allowed: &[String],
) -> Result<Formula, TranslateError> {
    let mut closing = Vec::new();
    for v in f.free_vars() {
        if allowed.contains(&v) {
            continue;
        }
        match vocab.declared_var(&v) {
            Some(np) => closing.push((v, np.clone())),
            None => return Err(TranslateError::UnboundVariable(v)),
        }
    }
    Ok(closing.into_iter().rev().fold(f, |acc, (v, np)| {
        let guard = notion_guard(&np, Term::var(v.clone()), vocab);
        Formula::forall(v, Formula::implies(guard, acc))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_statement, tokenize, PatternKind, ShapeElem};

    fn w(s: &str) -> ShapeElem {
        ShapeElem::Word(s.into())
    }

    fn vocab() -> Vocabulary {
        let v = Vocabulary::new();
        let (v, _) = v
            .register_pattern(PatternKind::Notion, vec![vec![w("set")]])
            .unwrap();
        let (v, _) = v
            .register_pattern(PatternKind::Notion, vec![vec![w("class")]])
            .unwrap();
        let (v, _) = v
            .register_pattern(
                PatternKind::Notion,
                vec![vec![w("subgroup"), w("of"), ShapeElem::Slot]],
            )
            .unwrap();
        v
    }

    fn tr(src: &str, v: &Vocabulary) -> String {
        translate(&parse_statement(&tokenize(src).unwrap(), v).unwrap(), v).to_string()
    }

    #[test]
    fn membership_in_a_dependent_notion() {
        assert_eq!(tr("H is a subgroup of G", &vocab()), "aSubgroupOf(H,G)");
    }

    #[test]
    fn universal_relativization() {
        assert_eq!(
            tr("every set x is a class", &vocab()),
            "forall x. (aSet(x) -> aClass(x))"
        );
    }

    #[test]
    fn undeclared_free_variable_is_reported() {
        let v = vocab();
        let st = parse_statement(&tokenize("x is a set").unwrap(), &v).unwrap();
        assert_eq!(
            translate_closed(&st, &v, &[]),
            Err(TranslateError::UnboundVariable("x".into()))
        );
        assert!(translate_closed(&st, &v, &["x".into()]).is_ok());
    }
}
