use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Premise, PremiseRole, ProofTask};
use crate::fol::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("induction needs a goal of the form `for every N x, ...`, found `{0}`")]
    BadInductionShape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionInfo {
    pub symbol: String,
    pub label: String,
    pub params: Vec<String>,
    pub body: Formula,
}

/// Definitions among the premises of `task`, read back from their
/// `forall params. (head <-> body)` form.
pub fn definitions_of(task: &ProofTask) -> Vec<DefinitionInfo> {
    let mut out = Vec::new();
    for p in &task.premises {
        let PremiseRole::Definition(symbol) = &p.role else {
            continue;
        };
        let mut f = &p.formula;
        while let Formula::Forall(_, body) = f {
            f = body;
        }
        let Formula::Iff(head, body) = f else {
            continue;
        };
        let Formula::Atom(atom) = &**head else {
            continue;
        };
        let params: Option<Vec<String>> = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => Some(v.clone()),
                Term::App(..) => None,
            })
            .collect();
        let Some(params) = params else { continue };
        out.push(DefinitionInfo {
            symbol: symbol.clone(),
            label: p.label.clone(),
            params,
            body: (**body).clone(),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub task: ProofTask,
    /// Set when unfolding stopped at the depth limit with a symbol on a
    /// definitional cycle still present.
    pub cyclic: Option<Vec<String>>,
}

fn unfold_once(
    goal: &Formula,
    defs: &BTreeMap<&str, &DefinitionInfo>,
    used: &mut BTreeSet<String>,
) -> Formula {
    goal.map_atoms(&mut |a| {
        let d = defs.get(a.pred.as_str())?;
        if d.params.len() != a.args.len() {
            return None;
        }
        used.insert(d.label.clone());
        let map: BTreeMap<String, Term> = d
            .params
            .iter()
            .cloned()
            .zip(a.args.iter().cloned())
            .collect();
        Some(d.body.substitute(&map))
    })
}

/// Symbols that can reach themselves through definition bodies.
fn cyclic_symbols(defs: &[DefinitionInfo]) -> BTreeSet<String> {
    let edges: BTreeMap<&str, BTreeSet<String>> = defs
        .iter()
        .map(|d| {
            (
                d.symbol.as_str(),
                d.body.predicates().into_iter().map(|(p, _)| p).collect(),
            )
        })
        .collect();
    let mut out = BTreeSet::new();
    for d in defs {
        let mut seen = BTreeSet::new();
        let mut todo: Vec<String> = edges[d.symbol.as_str()].iter().cloned().collect();
        while let Some(s) = todo.pop() {
            if s == d.symbol {
                out.insert(d.symbol.clone());
                break;
            }
            if seen.insert(s.clone()) {
                if let Some(next) = edges.get(s.as_str()) {
                    todo.extend(next.iter().cloned());
                }
            }
        }
    }
    out
}

/// Unfolds defined symbols in the goal, `depth` rounds at most. The
/// definitions used stay available as premises.
pub fn expand_definitions(task: &ProofTask, defs: &[DefinitionInfo], depth: usize) -> Expansion {
    let by_symbol: BTreeMap<&str, &DefinitionInfo> =
        defs.iter().map(|d| (d.symbol.as_str(), d)).collect();
    let mut goal = task.goal.clone();
    let mut used = BTreeSet::new();
    for _ in 0..depth {
        let next = unfold_once(&goal, &by_symbol, &mut used);
        if next == goal {
            break;
        }
        goal = next;
    }
    let mut out = task.clone();
    out.goal = goal;
    for d in defs {
        if used.contains(&d.label) && !out.premises.iter().any(|p| p.label == d.label) {
            let f = d.params.iter().rev().fold(
                Formula::iff(
                    Formula::atom(d.symbol.clone(), d.params.iter().map(Term::var).collect()),
                    d.body.clone(),
                ),
                |acc, v| Formula::forall(v.clone(), acc),
            );
            out.premises.push(Premise {
                label: d.label.clone(),
                formula: f,
                role: PremiseRole::Definition(d.symbol.clone()),
                seq: 0,
            });
        }
    }
    let cycles = cyclic_symbols(defs);
    let left: Vec<String> = out
        .goal
        .predicates()
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| cycles.contains(p))
        .collect();
    let cyclic = (depth > 0 && !left.is_empty()).then_some(left);
    Expansion { task: out, cyclic }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub task: ProofTask,
    /// The variable replaced by the constant.
    pub var: String,
}

/// Turns `forall x. (guard(x) -> P(x))` into `guard(c) -> P(c)` with the
/// induction hypothesis `forall x. (guard(x) & order(x, c) -> P(x))`
/// appended to the premises. Only the outermost quantifier is used.
pub fn generate_induction(
    task: &ProofTask,
    order: &str,
    c: &Term,
) -> Result<Induced, InductionError> {
    let shape_error = || InductionError::BadInductionShape(task.goal.to_string());
    let Formula::Forall(x, body) = &task.goal else {
        return Err(shape_error());
    };
    let Formula::Implies(guard, p) = &**body else {
        return Err(shape_error());
    };
    let below = Formula::atom(order, vec![Term::var(x.clone()), c.clone()]);
    let ih = Formula::forall(
        x.clone(),
        Formula::implies(Formula::and((**guard).clone(), below), (**p).clone()),
    );
    let mut out = task.clone();
    out.goal = Formula::implies(guard.substitute_var(x, c), p.substitute_var(x, c));
    out.premises.push(Premise {
        label: "ih".into(),
        formula: ih,
        role: PremiseRole::InductionHypothesis,
        seq: task.seq,
    });
    out.hints.induction = Some(order.to_string());
    Ok(Induced {
        task: out,
        var: x.clone(),
    })
}

fn symbols(f: &Formula) -> BTreeSet<String> {
    let mut s = f.symbols();
    s.remove("=");
    s
}

/// Keeps the premises whose symbols connect to the goal's symbols within
/// `k` steps of shared-symbol adjacency. Local hypotheses and definitions
/// of goal symbols are always kept, and the symbols of local hypotheses
/// count as reached from the start.
pub fn filter_premises(task: &ProofTask, k: usize) -> ProofTask {
    let goal_symbols = symbols(&task.goal);
    let mut reached = goal_symbols.clone();
    let premise_symbols: Vec<BTreeSet<String>> =
        task.premises.iter().map(|p| symbols(&p.formula)).collect();
    let mut keep: Vec<bool> = task
        .premises
        .iter()
        .map(|p| match &p.role {
            PremiseRole::Definition(s) => goal_symbols.contains(s),
            role => role.is_local(),
        })
        .collect();
    for (i, syms) in premise_symbols.iter().enumerate() {
        if keep[i] && task.premises[i].role.is_local() {
            reached.extend(syms.iter().cloned());
        }
    }
    for _ in 0..k {
        let mut added = Vec::new();
        for (i, syms) in premise_symbols.iter().enumerate() {
            if !keep[i] && !syms.is_disjoint(&reached) {
                added.push(i);
            }
        }
        if added.is_empty() {
            break;
        }
        for i in added {
            keep[i] = true;
            reached.extend(premise_symbols[i].iter().cloned());
        }
    }
    let mut out = task.clone();
    out.premises = task
        .premises
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(p, _)| p.clone())
        .collect();
    out
}
