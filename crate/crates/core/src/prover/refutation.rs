//! Refutation objects and their independent step checker.

use std::fmt;

use super::inference::{
    chain_under, chain_unifies, factor_under, rename_apart, resolvent_under, ChainKind,
};
use crate::fol::{Clause, Substitution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Input,
    Resolution {
        parents: (usize, usize),
        literals: (usize, usize),
        unifier: Substitution,
    },
    Factoring {
        parent: usize,
        literals: (usize, usize),
        unifier: Substitution,
    },
    Chaining {
        relation: String,
        kind: ChainKind,
        parents: (usize, usize),
        literals: (usize, usize),
        unifier: Substitution,
    },
}

impl Rule {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Rule::Input => vec![],
            Rule::Resolution {
                parents: (a, b), ..
            }
            | Rule::Chaining {
                parents: (a, b), ..
            } => vec![*a, *b],
            Rule::Factoring { parent, .. } => vec![*parent],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: usize,
    pub rule: Rule,
    pub clause: Clause,
}

/// Inference steps in topological order; the last step is the sink.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Refutation {
    pub steps: Vec<Step>,
}

impl Refutation {
    pub fn step(&self, id: usize) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn sink(&self) -> Option<&Step> {
        self.steps.last()
    }

    /// Input clauses, i.e. the leaves of the proof.
    pub fn inputs(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.rule == Rule::Input)
    }
}

/// Line-oriented form: `id. <clause> [rule parent-ids]`.
impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let tag = match &s.rule {
                Rule::Input => "input".to_string(),
                Rule::Resolution {
                    parents: (a, b), ..
                } => format!("resolution {a} {b}"),
                Rule::Factoring { parent, .. } => format!("factoring {parent}"),
                Rule::Chaining {
                    relation,
                    parents: (a, b),
                    ..
                } => format!("chain({relation}) {a} {b}"),
            };
            writeln!(f, "{}. {} [{}]", s.id, s.clause, tag)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckResult {
    Ok,
    BadStep(usize),
}

fn same_literals(a: &Clause, b: &Clause) -> bool {
    a.literals == b.literals
}

/// Re-derives every step from its parents using only unification and
/// literal bookkeeping.
pub fn check_refutation(r: &Refutation) -> CheckResult {
    for (n, step) in r.steps.iter().enumerate() {
        let earlier = |id: usize| r.steps[..n].iter().find(|s| s.id == id).map(|s| &s.clause);
        let ok = match &step.rule {
            Rule::Input => true,
            Rule::Resolution {
                parents: (a, b),
                literals: (i, j),
                unifier,
            } => match (earlier(*a), earlier(*b)) {
                (Some(c1), Some(c2)) => {
                    let c2r = rename_apart(c1, c2);
                    match (c1.literals.get(*i), c2r.literals.get(*j)) {
                        (Some(l1), Some(l2)) => {
                            l1.positive != l2.positive
                                && l1.atom.map_terms(|t| unifier.apply(t))
                                    == l2.atom.map_terms(|t| unifier.apply(t))
                                && same_literals(
                                    &resolvent_under(c1, *i, &c2r, *j, unifier),
                                    &step.clause,
                                )
                        }
                        _ => false,
                    }
                }
                _ => false,
            },
            Rule::Factoring {
                parent,
                literals: (i, j),
                unifier,
            } => match earlier(*parent) {
                Some(c) => match (c.literals.get(*i), c.literals.get(*j)) {
                    (Some(l1), Some(l2)) => {
                        i != j
                            && l1.positive == l2.positive
                            && l1.atom.map_terms(|t| unifier.apply(t))
                                == l2.atom.map_terms(|t| unifier.apply(t))
                            && same_literals(&factor_under(c, unifier), &step.clause)
                    }
                    _ => false,
                },
                None => false,
            },
            Rule::Chaining {
                relation,
                kind,
                parents: (a, b),
                literals: (i, j),
                unifier,
            } => match (earlier(*a), earlier(*b)) {
                (Some(c1), Some(c2)) => {
                    let c2r = rename_apart(c1, c2);
                    *i < c1.len()
                        && *j < c2r.len()
                        && chain_unifies(c1, *i, &c2r, *j, relation, *kind, unifier)
                        && chain_under(c1, *i, &c2r, *j, relation, *kind, unifier)
                            .is_ok_and(|c| same_literals(&c, &step.clause))
                }
                _ => false,
            },
        };
        if !ok {
            return CheckResult::BadStep(step.id);
        }
    }
    match r.sink() {
        Some(s) if s.clause.is_empty() => CheckResult::Ok,
        Some(s) => CheckResult::BadStep(s.id),
        None => CheckResult::BadStep(0),
    }
}
