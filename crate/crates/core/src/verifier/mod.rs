//! Turns a parsed document into proof tasks and discharges them.

mod build;
mod lemma;
mod run;
mod transform;

use std::fmt;

use crate::fol::Formula;
use crate::syntax::SourcePos;

pub use build::{build_tasks, BuildError};
pub use lemma::{local_lemma_pass, LemmaOutcome};
pub use run::{
    prepare_task, process_task, verify_document, Backend, FailReason, GoalStatus, Prepared,
    ReportEntry, Summary, VerificationReport, VerifyConfig, VerifyError,
};
pub use transform::{
    definitions_of, expand_definitions, filter_premises, generate_induction, DefinitionInfo,
    Expansion, Induced, InductionError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremiseRole {
    Axiom,
    /// Definitional equivalence for the symbol.
    Definition(String),
    /// An earlier theorem or lemma.
    Claim,
    /// An earlier step of the enclosing proofs.
    Step,
    CaseHypothesis,
    /// `hypothesis -> steps` for a finished case.
    CaseSummary,
    /// The disjunction of the hypotheses of a finished case analysis.
    CaseSplit,
    /// Guard of a variable fixed as a constant for the proof.
    Assumption,
    InductionHypothesis,
    Transitivity(String),
    /// Atomic fact attached by the local lemma pass.
    Lemma,
}

impl PremiseRole {
    /// Premises that the relevance filter must keep.
    pub fn is_local(&self) -> bool {
        matches!(
            self,
            PremiseRole::CaseHypothesis
                | PremiseRole::Assumption
                | PremiseRole::InductionHypothesis
                | PremiseRole::Lemma
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premise {
    pub label: String,
    pub formula: Formula,
    pub role: PremiseRole,
    /// Position in the logical order of the document.
    pub seq: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalKind {
    Claim,
    Step,
    /// The case hypotheses of a case analysis cover all possibilities.
    CaseCompleteness,
}

impl fmt::Display for GoalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoalKind::Claim => "claim",
            GoalKind::Step => "step",
            GoalKind::CaseCompleteness => "cases",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hints {
    /// Labels of the hypotheses of the enclosing cases.
    pub case_hypotheses: Vec<String>,
    /// Order symbol when the task is an induction step.
    pub induction: Option<String>,
    /// Definition unfolding budget.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTask {
    pub goal: Formula,
    pub premises: Vec<Premise>,
    pub origin: SourcePos,
    pub kind: GoalKind,
    pub seq: usize,
    pub hints: Hints,
}

impl ProofTask {
    pub fn labeled_premises(&self) -> Vec<(String, Formula)> {
        self.premises
            .iter()
            .map(|p| (p.label.clone(), p.formula.clone()))
            .collect()
    }

    /// Premises and goal as plain text, one formula per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in &self.premises {
            out.push_str(&format!("{}: {}\n", p.label, p.formula));
        }
        out.push_str(&format!("goal: {}\n", self.goal));
        out
    }
}
