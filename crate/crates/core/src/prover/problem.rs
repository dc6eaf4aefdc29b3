use crate::fol::{
    brand_transform, clausify, uninterpreted_equality, Clause, ClauseSource, Formula, SkolemCounter,
};

/// Clauses of a proof problem, split into premise clauses and clauses of
/// the negated goal (the set of support).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClauseProblem {
    pub premises: Vec<Clause>,
    pub goals: Vec<Clause>,
}

impl ClauseProblem {
    pub fn all(&self) -> Vec<Clause> {
        self.premises.iter().chain(&self.goals).cloned().collect()
    }
}

/// Clausifies `premises ⊢ goal`: premises keep their labels as clause
/// sources, the goal is closed and negated. Equality, if present anywhere,
/// is eliminated by Brand's modification.
pub fn clausify_problem(premises: &[(String, Formula)], goal: &Formula) -> ClauseProblem {
    clausify_with(premises, goal, brand_transform)
}

/// Like [`clausify_problem`] but equality keeps only reflexivity and
/// symmetry. A cheap first attempt: proofs found this way are sound.
pub fn clausify_problem_uninterpreted(
    premises: &[(String, Formula)],
    goal: &Formula,
) -> ClauseProblem {
    clausify_with(premises, goal, uninterpreted_equality)
}

fn clausify_with(
    premises: &[(String, Formula)],
    goal: &Formula,
    equality: fn(&[Clause]) -> Vec<Clause>,
) -> ClauseProblem {
    let mut skolems = SkolemCounter::new();
    let mut all = Vec::new();
    for (label, f) in premises {
        all.extend(clausify(
            &f.universal_closure(),
            &mut skolems,
            ClauseSource::Premise(label.clone()),
        ));
    }
    all.extend(clausify(
        &Formula::not(goal.universal_closure()),
        &mut skolems,
        ClauseSource::GoalNegation,
    ));
    if all.iter().any(Clause::contains_equality) {
        all = equality(&all);
    }
    let (goals, premises) = all
        .into_iter()
        .partition(|c| c.source == ClauseSource::GoalNegation);
    ClauseProblem { premises, goals }
}
