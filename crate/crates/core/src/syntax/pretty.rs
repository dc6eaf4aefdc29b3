//! Canonical printing of statements and documents. Binary connectives are
//! fully parenthesized so that the output reparses to the same tree.

use super::ast::*;
use super::vocab::{PatternKind, ShapeElem, Vocabulary};

pub fn term(t: &SurfaceTerm, vocab: &Vocabulary) -> String {
    match t {
        SurfaceTerm::Var(v) => v.clone(),
        SurfaceTerm::App(id, args) => fill(&vocab.pattern(*id).forms[0], args, vocab, None),
    }
}

/// A term in a pattern slot; compound terms are parenthesized to keep slot
/// boundaries unambiguous.
fn slot_term(t: &SurfaceTerm, vocab: &Vocabulary) -> String {
    match t {
        SurfaceTerm::App(_, args) if !args.is_empty() => format!("({})", term(t, vocab)),
        _ => term(t, vocab),
    }
}

/// Substitutes `args` into the slots of `shape`; `name` is placed after the
/// word where the parser accepts a notion name.
fn fill(
    shape: &[ShapeElem],
    args: &[SurfaceTerm],
    vocab: &Vocabulary,
    name: Option<&str>,
) -> String {
    let name_at = name.map(|_| name_position(shape));
    let mut out: Vec<String> = Vec::new();
    let mut args = args.iter();
    for (k, e) in shape.iter().enumerate() {
        match e {
            ShapeElem::Word(w) => out.push(w.clone()),
            ShapeElem::Slot => out.push(
                args.next()
                    .map_or_else(|| "?".to_string(), |a| slot_term(a, vocab)),
            ),
        }
        if name_at == Some(Some(k)) {
            out.push(name.unwrap().to_string());
        }
    }
    if name_at == Some(None) {
        out.push(name.unwrap().to_string());
    }
    out.join(" ")
}

/// Index of the last word of the leading word run after which a name may
/// stand, or `None` when the name goes after the whole phrase.
fn name_position(shape: &[ShapeElem]) -> Option<usize> {
    let mut best = None;
    for k in 0..shape.len() {
        if !matches!(shape[k], ShapeElem::Word(_)) {
            break;
        }
        if k + 1 == shape.len() || matches!(shape[k + 1], ShapeElem::Word(_)) {
            best = Some(k);
        }
    }
    best
}

pub fn notion_phrase(np: &NotionPhrase, vocab: &Vocabulary) -> String {
    let mut parts: Vec<String> = np
        .adjectives
        .iter()
        .map(|a| fill(&vocab.pattern(*a).forms[0], &[], vocab, None))
        .collect();
    parts.push(fill(
        &vocab.pattern(np.notion).forms[0],
        &np.args,
        vocab,
        np.var.as_deref(),
    ));
    parts.join(" ")
}

fn article(phrase: &str) -> &'static str {
    match phrase.chars().next() {
        Some(c) if "aeiouAEIOU".contains(c) => "an",
        _ => "a",
    }
}

pub fn statement(s: &Statement, vocab: &Vocabulary) -> String {
    match s {
        Statement::Quantified {
            quantifier,
            notion,
            scope,
        } => format!(
            "(for {} {}, {})",
            quantifier.word(),
            notion_phrase(notion, vocab),
            statement(scope, vocab)
        ),
        Statement::Predicate { pattern, args } => {
            fill(&vocab.pattern(*pattern).forms[0], args, vocab, None)
        }
        Statement::IsNotion { subject, notion } => {
            let np = notion_phrase(notion, vocab);
            format!("{} is {} {}", term(subject, vocab), article(&np), np)
        }
        Statement::HasAdjective {
            subject,
            adjective,
            args,
        } => format!(
            "{} is {}",
            term(subject, vocab),
            fill(&vocab.pattern(*adjective).forms[0], args, vocab, None)
        ),
        Statement::Relation { symbol, lhs, rhs } => {
            format!("{} {} {}", term(lhs, vocab), symbol, term(rhs, vocab))
        }
        Statement::And(a, b) => format!("({} and {})", statement(a, vocab), statement(b, vocab)),
        Statement::Or(a, b) => format!("({} or {})", statement(a, vocab), statement(b, vocab)),
        Statement::Implies(a, b) => {
            format!("({} implies {})", statement(a, vocab), statement(b, vocab))
        }
        Statement::Iff(a, b) => format!("({} iff {})", statement(a, vocab), statement(b, vocab)),
        Statement::Not(a) => format!("not {}", statement(a, vocab)),
    }
}

fn decl_form(form: &[DeclElem]) -> String {
    form.iter()
        .map(|e| match e {
            DeclElem::Word(w) | DeclElem::Slot(w) => w.as_str(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn sig_decl(d: &SigDecl, vocab: &Vocabulary) -> String {
    match d {
        SigDecl::Pattern { id, forms } => {
            let pattern = vocab.pattern(*id);
            let shapes: Vec<String> = forms.iter().map(|f| decl_form(f)).collect();
            let joined = shapes.join(" / ");
            match pattern.kind {
                PatternKind::Notion => format!("{} {} is a notion.", article(&joined), joined),
                PatternKind::Adjective => format!("{joined} is an adjective."),
                PatternKind::Predicate => format!("{joined} is a predicate."),
                PatternKind::Function if pattern.arity == 0 => format!("{joined} is a constant."),
                PatternKind::Function => format!("{joined} is a function."),
            }
        }
        SigDecl::Relation {
            symbol,
            lhs,
            rhs,
            transitive,
            wellfounded,
        } => {
            let mut mods = String::new();
            if *transitive {
                mods.push_str("transitive ");
            }
            if *wellfounded {
                mods.push_str("wellfounded ");
            }
            format!("{lhs} {symbol} {rhs} is a {mods}relation.")
        }
        SigDecl::Let { vars, notion } => {
            let np = notion_phrase(notion, vocab);
            format!("Let {} denote {} {}.", vars.join(", "), article(&np), np)
        }
    }
}

fn steps(out: &mut String, steps_: &[Step], vocab: &Vocabulary) {
    for s in steps_ {
        match s {
            Step::Assert {
                statement: st,
                proof: p,
                ..
            } => {
                out.push_str(&statement(st, vocab));
                out.push_str(".\n");
                if let Some(p) = p {
                    proof(out, p, vocab);
                }
            }
            Step::Case {
                hypothesis,
                steps: inner,
                ..
            } => {
                out.push_str("Case ");
                out.push_str(&statement(hypothesis, vocab));
                out.push_str(".\n");
                steps(out, inner, vocab);
                out.push_str("end.\n");
            }
        }
    }
}

fn proof(out: &mut String, p: &ProofBlock, vocab: &Vocabulary) {
    match &p.induction {
        Some(order) => out.push_str(&format!("Proof by induction on {order}.\n")),
        None => out.push_str("Proof.\n"),
    }
    steps(out, &p.steps, vocab);
    out.push_str("end.\n");
}

/// Prints a document; `vocab` must be the vocabulary produced by parsing it.
pub fn document(doc: &Document, vocab: &Vocabulary) -> String {
    let mut out = String::new();
    for (n, b) in doc.blocks.iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        match b {
            Block::Signature { decls, .. } => {
                out.push_str("Signature.\n");
                for d in decls {
                    out.push_str(&sig_decl(d, vocab));
                    out.push('\n');
                }
            }
            Block::Definition { definition, .. } => {
                out.push_str("Definition.\n");
                out.push_str(&format!(
                    "{} iff {}.\n",
                    statement(&definition.head, vocab),
                    statement(&definition.body, vocab)
                ));
            }
            Block::Axiom { statement: st, .. } => {
                out.push_str("Axiom.\n");
                out.push_str(&statement(st, vocab));
                out.push_str(".\n");
            }
            Block::Claim {
                kind,
                statement: st,
                proof: p,
                ..
            } => {
                out.push_str(kind.keyword());
                out.push_str(".\n");
                out.push_str(&statement(st, vocab));
                out.push_str(".\n");
                if let Some(p) = p {
                    proof(&mut out, p, vocab);
                }
            }
        }
    }
    out
}
