use std::collections::BTreeMap;
use std::fmt;

use super::formula::{Atom, Formula};
use super::term::{Substitution, Term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }

    pub fn apply(&self, sub: &Substitution) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.map_terms(|t| sub.apply(t)),
        }
    }

    pub fn weight(&self) -> usize {
        self.atom.weight()
    }

    pub fn to_formula(&self) -> Formula {
        let atom = if self.atom.is_equality() {
            Formula::Eq(self.atom.args[0].clone(), self.atom.args[1].clone())
        } else {
            Formula::Atom(self.atom.clone())
        };
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.positive, self.atom.is_equality()) {
            (true, _) => write!(f, "{}", self.atom),
            (false, true) => write!(f, "{} != {}", self.atom.args[0], self.atom.args[1]),
            (false, false) => write!(f, "~{}", self.atom),
        }
    }
}

/// Where a clause came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseSource {
    /// Clausified premise, carrying the premise label.
    Premise(String),
    /// Clausified negation of the goal.
    GoalNegation,
    Derived,
}

/// A disjunction of literals. Duplicate literals are removed on
/// construction; variables are local to the clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub source: ClauseSource,
}

impl Clause {
    pub fn new(literals: Vec<Literal>, source: ClauseSource) -> Clause {
        let mut out: Vec<Literal> = Vec::with_capacity(literals.len());
        for lit in literals {
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        Clause {
            literals: out,
            source,
        }
    }

    pub fn derived(literals: Vec<Literal>) -> Clause {
        Clause::new(literals, ClauseSource::Derived)
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, a)| self.literals[i + 1..].iter().any(|b| a.is_complement_of(b)))
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    pub fn weight(&self) -> usize {
        self.literals.iter().map(Literal::weight).sum()
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for lit in &self.literals {
            for t in &lit.atom.args {
                t.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn apply(&self, sub: &Substitution) -> Clause {
        Clause::new(
            self.literals.iter().map(|l| l.apply(sub)).collect(),
            self.source.clone(),
        )
    }

    pub fn rename_vars(&self, map: impl Fn(&str) -> String) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .map(|l| Literal {
                    positive: l.positive,
                    atom: l.atom.map_terms(|t| t.rename_vars(&map)),
                })
                .collect(),
            source: self.source.clone(),
        }
    }

    /// Renames variables to `X0, X1, ...` in order of first occurrence.
    pub fn normalized(&self) -> Clause {
        let names: BTreeMap<String, String> = self
            .vars()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, format!("X{i}")))
            .collect();
        self.rename_vars(|v| names[v].clone())
    }

    pub fn contains_equality(&self) -> bool {
        self.literals.iter().any(|l| l.atom.is_equality())
    }

    /// Universally closed disjunction of the literals.
    pub fn to_formula(&self) -> Formula {
        Formula::disjunction(self.literals.iter().map(Literal::to_formula)).universal_closure()
    }

    pub fn with_source(mut self, source: ClauseSource) -> Clause {
        self.source = source;
        self
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "$false");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Convenience constructor used heavily in tests: `lit("~p", &[x])`.
pub fn lit(signed_pred: &str, args: Vec<Term>) -> Literal {
    match signed_pred.strip_prefix('~') {
        Some(p) => Literal::neg(Atom::new(p, args)),
        None => Literal::pos(Atom::new(signed_pred, args)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_removed_and_tautology_detected() {
        let x = Term::var("x");
        let c = Clause::derived(vec![
            lit("p", vec![x.clone()]),
            lit("p", vec![x.clone()]),
            lit("~p", vec![x]),
        ]);
        assert_eq!(c.len(), 2);
        assert!(c.is_tautology());
    }

    #[test]
    fn normalization_is_canonical() {
        let c = Clause::derived(vec![
            lit("p", vec![Term::var("u"), Term::var("w")]),
            lit("q", vec![Term::var("u")]),
        ]);
        assert_eq!(c.normalized().to_string(), "p(X0,X1) | q(X0)");
    }
}
