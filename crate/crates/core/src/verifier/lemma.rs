//! Cheap discharge of goals that follow from the premises by instantiation
//! or by unit propagation over ground facts.

use std::collections::{BTreeMap, BTreeSet};

use super::{Premise, PremiseRole, ProofTask};
use crate::fol::{clausify, Atom, ClauseSource, Formula, Literal, SkolemCounter, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaOutcome {
    /// The goal holds; the string names the premise used or the method.
    Discharged(String),
    /// The task with attached atomic lemmas.
    Remaining(ProofTask),
}

fn match_term(
    p: &Term,
    t: &Term,
    vars: &BTreeSet<String>,
    sub: &mut BTreeMap<String, Term>,
) -> bool {
    match p {
        Term::Var(v) if vars.contains(v) => match sub.get(v) {
            Some(bound) => bound == t,
            None => {
                sub.insert(v.clone(), t.clone());
                true
            }
        },
        Term::Var(_) => p == t,
        Term::App(f, fs) => match t {
            Term::App(g, gs) if f == g && fs.len() == gs.len() => {
                fs.iter().zip(gs).all(|(a, b)| match_term(a, b, vars, sub))
            }
            _ => false,
        },
    }
}

fn match_atom(
    p: &Atom,
    t: &Atom,
    vars: &BTreeSet<String>,
    sub: &mut BTreeMap<String, Term>,
) -> bool {
    p.pred == t.pred
        && p.args.len() == t.args.len()
        && p.args
            .iter()
            .zip(&t.args)
            .all(|(a, b)| match_term(a, b, vars, sub))
}

/// Matching on canonically renamed formulas; only `vars` may be bound.
fn match_formula(
    p: &Formula,
    t: &Formula,
    vars: &BTreeSet<String>,
    sub: &mut BTreeMap<String, Term>,
) -> bool {
    match (p, t) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Atom(a), Formula::Atom(b)) => match_atom(a, b, vars, sub),
        (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            match_term(a, c, vars, sub) && match_term(b, d, vars, sub)
        }
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, vars, sub),
        (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d))
        | (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::Iff(a, b), Formula::Iff(c, d)) => {
            match_formula(a, c, vars, sub) && match_formula(b, d, vars, sub)
        }
        (Formula::Forall(v, a), Formula::Forall(w, b))
        | (Formula::Exists(v, a), Formula::Exists(w, b)) => {
            v == w && !vars.contains(v) && match_formula(a, b, vars, sub)
        }
        _ => false,
    }
}

/// `forall xs. C` for every top-level conjunct `C` of a premise, looking
/// through leading universal quantifiers.
fn instances_of(f: &Formula) -> Vec<(BTreeSet<String>, Formula)> {
    let mut vars = BTreeSet::new();
    let mut body = f;
    while let Formula::Forall(v, b) = body {
        vars.insert(v.clone());
        body = b;
    }
    let mut out = vec![(BTreeSet::new(), f.clone())];
    for c in body.conjuncts() {
        let mut inner_vars = vars.clone();
        let mut c = c;
        while let Formula::Forall(v, b) = c {
            inner_vars.insert(v.clone());
            c = b;
        }
        out.push((inner_vars, c.clone()));
    }
    out
}

fn is_instance(goal: &Formula, premises: &[Premise]) -> Option<String> {
    let target = goal.canonical_bound();
    premises.iter().find_map(|p| {
        instances_of(&p.formula)
            .into_iter()
            .find_map(|(vars, pattern)| {
                let pattern = pattern.canonical_bound();
                match_formula(&pattern, &target, &vars, &mut BTreeMap::new())
                    .then(|| p.label.clone())
            })
    })
}

/// Ground facts derived from the ground quantifier-free premises by unit
/// propagation. `None` when the facts are contradictory.
fn propagate(premises: &[Premise]) -> Option<BTreeMap<Atom, bool>> {
    let mut clauses = Vec::new();
    for p in premises {
        for c in p.formula.conjuncts() {
            if c.is_quantifier_free() && c.is_ground() {
                clauses.extend(clausify(
                    c,
                    &mut SkolemCounter::new(),
                    ClauseSource::Derived,
                ));
            }
        }
    }
    let mut facts: BTreeMap<Atom, bool> = BTreeMap::new();
    loop {
        let mut changed = false;
        for c in &clauses {
            let mut open: Vec<&Literal> = Vec::new();
            let mut satisfied = false;
            for l in &c.literals {
                match facts.get(&l.atom) {
                    Some(&v) if v == l.positive => satisfied = true,
                    Some(_) => {}
                    None => open.push(l),
                }
            }
            if satisfied {
                continue;
            }
            match open.as_slice() {
                [] => return None,
                [l] => {
                    facts.insert(l.atom.clone(), l.positive);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return Some(facts);
        }
    }
}

/// Kleene evaluation of a quantifier-free goal under partial facts.
fn eval(f: &Formula, facts: &BTreeMap<Atom, bool>) -> Option<bool> {
    match f {
        Formula::True => Some(true),
        Formula::False => Some(false),
        Formula::Atom(a) => facts.get(a).copied(),
        Formula::Eq(s, t) if s == t => Some(true),
        Formula::Eq(s, t) => facts
            .get(&Atom::new(
                crate::fol::formula::EQUALITY,
                vec![s.clone(), t.clone()],
            ))
            .copied(),
        Formula::Not(a) => eval(a, facts).map(|v| !v),
        Formula::And(a, b) => match (eval(a, facts), eval(b, facts)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Formula::Or(a, b) => match (eval(a, facts), eval(b, facts)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Formula::Implies(a, b) => eval(
            &Formula::or(Formula::not((**a).clone()), (**b).clone()),
            facts,
        ),
        Formula::Iff(a, b) => Some(eval(a, facts)? == eval(b, facts)?),
        Formula::Forall(..) | Formula::Exists(..) => None,
    }
}

fn collect_atoms(f: &Formula, facts: &BTreeMap<Atom, bool>, out: &mut BTreeSet<Atom>) {
    match f {
        Formula::Atom(a) if !facts.contains_key(a) => {
            out.insert(a.clone());
        }
        Formula::Eq(s, t) if s != t => {
            let a = Atom::new(crate::fol::formula::EQUALITY, vec![s.clone(), t.clone()]);
            if !facts.contains_key(&a) {
                out.insert(a);
            }
        }
        Formula::Not(a) => collect_atoms(a, facts, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, facts, out);
            collect_atoms(b, facts, out);
        }
        _ => {}
    }
}

/// Most open atoms a goal may have for the exhaustive check.
const MAX_OPEN_ATOMS: usize = 10;

/// True when the quantifier-free goal holds under every assignment to the
/// atoms the facts leave open.
fn holds_under_facts(goal: &Formula, facts: &BTreeMap<Atom, bool>) -> bool {
    let mut open = BTreeSet::new();
    collect_atoms(goal, facts, &mut open);
    if open.len() > MAX_OPEN_ATOMS {
        return eval(goal, facts) == Some(true);
    }
    let open: Vec<Atom> = open.into_iter().collect();
    (0u32..1 << open.len()).all(|bits| {
        let mut extended = facts.clone();
        for (k, a) in open.iter().enumerate() {
            extended.insert(a.clone(), bits >> k & 1 == 1);
        }
        eval(goal, &extended) == Some(true)
    })
}

fn literal_formula(atom: &Atom, positive: bool) -> Formula {
    Literal {
        positive,
        atom: atom.clone(),
    }
    .to_formula()
}

/// Tries to discharge the goal without a prover. Otherwise returns the task
/// with the ground facts that mention goal symbols attached as premises.
pub fn local_lemma_pass(task: &ProofTask) -> LemmaOutcome {
    let facts = propagate(&task.premises);
    let Some(facts) = facts else {
        return LemmaOutcome::Discharged("contradictory ground facts".into());
    };
    let mut all = true;
    let mut used = Vec::new();
    for g in task.goal.conjuncts() {
        if let Some(label) = is_instance(g, &task.premises) {
            used.push(label);
        } else if g.is_quantifier_free() && holds_under_facts(g, &facts) {
            used.push("unit propagation".into());
        } else {
            all = false;
            break;
        }
    }
    if all {
        used.dedup();
        return LemmaOutcome::Discharged(used.join(", "));
    }
    let goal_symbols = task.goal.symbols();
    let mut out = task.clone();
    let mut n = 0;
    for (atom, &positive) in &facts {
        let f = literal_formula(atom, positive);
        if f.symbols().is_disjoint(&goal_symbols) {
            continue;
        }
        if out
            .premises
            .iter()
            .any(|p| p.role == PremiseRole::Lemma && p.formula == f)
        {
            continue;
        }
        n += 1;
        out.premises.push(Premise {
            label: format!("fact_{n}"),
            formula: f,
            role: PremiseRole::Lemma,
            seq: task.seq,
        });
    }
    LemmaOutcome::Remaining(out)
}
