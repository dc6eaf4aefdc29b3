//! Post-hoc checking of quantifier bounds for substitutions found on a
//! problem whose notion guards were erased.

use std::collections::BTreeMap;

use super::clause::Clause;
use super::formula::Atom;
use super::term::Substitution;
use super::unify::match_atom;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundViolation {
    pub var: String,
    /// The instantiated guard that could not be established.
    pub unproved: Atom,
}

/// Depth of backward chaining through Horn premises.
const DISCHARGE_DEPTH: usize = 3;

/// Checks each binding `x ↦ t` of `sub` against the guard atom recorded for
/// `x` in `bounds` (an atom mentioning `x`, e.g. `aNat(x)`). A guard holds
/// when its instance is derivable from `premises` by unit matching or by
/// short backward chaining through Horn clauses.
pub fn check_bounds(
    sub: &Substitution,
    bounds: &BTreeMap<String, Atom>,
    premises: &[Clause],
) -> Result<(), Vec<BoundViolation>> {
    let mut violations = Vec::new();
    for (var, _) in sub.iter() {
        let Some(guard) = bounds.get(var) else {
            continue;
        };
        let instance = guard.map_terms(|t| sub.apply(t));
        if !derivable(&instance, premises, DISCHARGE_DEPTH) {
            violations.push(BoundViolation {
                var: var.clone(),
                unproved: instance,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Ground atom derivability by matching premise heads.
pub fn derivable(goal: &Atom, premises: &[Clause], depth: usize) -> bool {
    for clause in premises {
        let positives: Vec<_> = clause.literals.iter().filter(|l| l.positive).collect();
        if positives.len() != 1 {
            continue;
        }
        let mut sub = Substitution::new();
        if !match_atom(&positives[0].atom, goal, &mut sub) {
            continue;
        }
        let body: Vec<Atom> = clause
            .literals
            .iter()
            .filter(|l| !l.positive)
            .map(|l| l.atom.map_terms(|t| sub.apply(t)))
            .collect();
        if body.is_empty() {
            return true;
        }
        if depth > 0
            && body
                .iter()
                .all(|b| b.is_ground() && derivable(b, premises, depth - 1))
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::clause::lit;
    use crate::fol::term::Term;

    fn bounds() -> BTreeMap<String, Atom> {
        BTreeMap::from([("x".to_string(), Atom::new("aNat", vec![Term::var("x")]))])
    }

    fn sub_x_c() -> Substitution {
        [("x".to_string(), Term::constant("c"))]
            .into_iter()
            .collect()
    }

    #[test]
    fn direct_premise_match() {
        let premises = vec![Clause::derived(vec![lit(
            "aNat",
            vec![Term::constant("c")],
        )])];
        assert_eq!(check_bounds(&sub_x_c(), &bounds(), &premises), Ok(()));
    }

    #[test]
    fn missing_fact_is_a_violation() {
        let premises = vec![Clause::derived(vec![lit(
            "aInt",
            vec![Term::constant("c")],
        )])];
        let err = check_bounds(&sub_x_c(), &bounds(), &premises).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].var, "x");
        assert_eq!(err[0].unproved.to_string(), "aNat(c)");
    }

    #[test]
    fn empty_substitution_is_ok() {
        assert_eq!(check_bounds(&Substitution::new(), &bounds(), &[]), Ok(()));
    }

    #[test]
    fn horn_chaining() {
        let premises = vec![
            Clause::derived(vec![
                lit("~aInt", vec![Term::var("y")]),
                lit("aNat", vec![Term::var("y")]),
            ]),
            Clause::derived(vec![lit("aInt", vec![Term::constant("c")])]),
        ];
        assert_eq!(check_bounds(&sub_x_c(), &bounds(), &premises), Ok(()));
    }
}
