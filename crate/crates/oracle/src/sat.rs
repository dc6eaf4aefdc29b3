use std::collections::BTreeMap;

use ftl_core::fol::{Atom, Clause};

use crate::model::{for_each_interpretation, Interpretation, Signature};

/// DPLL over clauses of non-zero integer literals (sign = polarity).
pub fn dpll(clauses: &[Vec<i32>], vars: usize) -> bool {
    let mut assign = vec![0i8; vars + 1];
    solve(clauses, &mut assign)
}

fn value(lit: i32, assign: &[i8]) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

fn solve(clauses: &[Vec<i32>], assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    // unit propagation
    loop {
        let mut unit = None;
        for c in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut sat = false;
            for &l in c {
                match value(l, assign) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        open_count += 1;
                        open = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            if open_count == 0 {
                for v in trail {
                    assign[v] = 0;
                }
                return false;
            }
            if open_count == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = if l > 0 { 1 } else { -1 };
                trail.push(v);
            }
            None => break,
        }
    }
    let branch = clauses
        .iter()
        .flat_map(|c| c.iter())
        .map(|l| l.unsigned_abs() as usize)
        .find(|&v| assign[v] == 0);
    let result = match branch {
        None => true,
        Some(v) => [1i8, -1].iter().any(|&b| {
            assign[v] = b;
            let ok = solve(clauses, assign);
            if !ok {
                assign[v] = 0;
            }
            ok
        }),
    };
    if !result {
        for v in trail {
            assign[v] = 0;
        }
    }
    result
}

/// Ground instances of `clauses` over the interpretation's function tables,
/// as propositional clauses over ground predicate atoms. Equality literals
/// are decided by identity.
fn ground(
    clauses: &[Clause],
    m: &Interpretation,
    atoms: &mut BTreeMap<(String, Vec<usize>), i32>,
) -> Option<Vec<Vec<i32>>> {
    let mut out = Vec::new();
    for c in clauses {
        let vars = c.vars();
        let mut failed = false;
        crate::model::every_assignment(m.size, &vars, &mut |env| {
            let mut lits = Vec::new();
            for l in &c.literals {
                let vals: Vec<usize> = l.atom.args.iter().map(|t| m.term(t, env)).collect();
                if l.atom.is_equality() {
                    if (vals[0] == vals[1]) == l.positive {
                        return true; // clause instance satisfied
                    }
                    continue;
                }
                let next = atoms.len() as i32 + 1;
                let id = *atoms.entry((l.atom.pred.clone(), vals)).or_insert(next);
                lits.push(if l.positive { id } else { -id });
            }
            if lits.is_empty() {
                failed = true;
                return false;
            }
            out.push(lits);
            true
        });
        if failed {
            return None;
        }
    }
    Some(out)
}

/// Whether the clause set has a model with 1..=max_size elements.
pub fn clauses_satisfiable(clauses: &[Clause], max_size: usize) -> bool {
    // predicates are left to the SAT solver; only function tables are enumerated
    let sig = Signature {
        predicates: Default::default(),
        functions: Signature::of_clauses(clauses).functions,
    };
    (1..=max_size).any(|n| {
        !for_each_interpretation(&sig, n, &mut |m| {
            let mut atoms = BTreeMap::new();
            match ground(clauses, m, &mut atoms) {
                Some(props) => !dpll(&props, atoms.len()),
                None => true,
            }
        })
    })
}

/// Truth-table satisfiability of clauses over 0-ary predicates.
pub fn truth_table_satisfiable(clauses: &[Clause]) -> bool {
    let mut names: Vec<String> = clauses
        .iter()
        .flat_map(|c| c.literals.iter().map(|l| l.atom.pred.clone()))
        .collect();
    names.sort();
    names.dedup();
    assert!(
        clauses
            .iter()
            .all(|c| c.literals.iter().all(|l| l.atom.args.is_empty())),
        "propositional clauses only"
    );
    (0u64..1 << names.len()).any(|bits| {
        clauses.iter().all(|c| {
            c.literals.iter().any(|l| {
                let k = names.binary_search(&l.atom.pred).unwrap();
                (bits >> k & 1 == 1) == l.positive
            })
        })
    })
}

/// Convenience for tests: a propositional atom.
pub fn prop(name: &str) -> Atom {
    Atom::new(name, vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use ftl_core::fol::clause::lit;
    use ftl_core::fol::Term;

    #[test]
    fn dpll_basics() {
        assert!(dpll(&[vec![1, 2], vec![-1]], 2));
        assert!(!dpll(&[vec![1], vec![-1]], 1));
        assert!(!dpll(
            &[vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]],
            2
        ));
    }

    #[test]
    fn equality_is_identity() {
        let a = || Term::constant("a");
        let b = || Term::constant("b");
        let cs = vec![
            Clause::derived(vec![lit("=", vec![a(), b()])]),
            Clause::derived(vec![lit("P", vec![a()])]),
            Clause::derived(vec![lit("~P", vec![b()])]),
        ];
        assert!(!clauses_satisfiable(&cs, 3));
        assert!(clauses_satisfiable(&cs[1..], 3));
    }
}
