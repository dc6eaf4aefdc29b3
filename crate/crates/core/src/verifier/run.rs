use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::build::{build_tasks, BuildError};
use super::lemma::{local_lemma_pass, LemmaOutcome};
use super::transform::{definitions_of, expand_definitions, filter_premises};
use super::{GoalKind, PremiseRole, ProofTask};
use crate::bridge::{run_external, write_problem, ExternalProverSpec, ExternalVerdict};
use crate::prover::{
    check_refutation, clausify_problem, clausify_problem_uninterpreted, prove_with_stats,
    CheckResult, ProverConfig, Refutation, Verdict,
};
use crate::syntax::{Document, SourcePos, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Native,
    External(ExternalProverSpec),
}

impl Backend {
    pub fn id(&self) -> &str {
        match self {
            Backend::Native => "native",
            Backend::External(spec) => &spec.id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Tried in order until one proves the goal.
    pub backends: Vec<Backend>,
    pub timeout: Duration,
    pub depth: usize,
    pub filter_k: usize,
    /// Use the chaining rule for transitive relations instead of their
    /// transitivity axioms.
    pub chaining: bool,
    pub max_clauses: usize,
    pub dump: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            backends: vec![Backend::Native],
            timeout: Duration::from_secs(10),
            depth: 2,
            filter_k: 2,
            chaining: true,
            max_clauses: 200_000,
            dump: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailReason {
    Timeout,
    /// The search space was exhausted without a proof.
    Refuted,
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalStatus {
    VerifiedByLemma,
    /// `checked` is false for external provers, whose proofs are not kept.
    VerifiedByProver {
        prover: String,
        millis: u128,
        checked: bool,
    },
    Failed(FailReason),
}

impl GoalStatus {
    pub fn is_verified(&self) -> bool {
        !matches!(self, GoalStatus::Failed(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub origin: SourcePos,
    pub kind: GoalKind,
    pub status: GoalStatus,
    pub refutation: Option<Refutation>,
    /// The task as given to the prover, after all transformations.
    pub task: ProofTask,
    pub warnings: Vec<String>,
}

impl ReportEntry {
    /// A failed goal is still assumed by the goals after it.
    pub fn assumed(&self) -> bool {
        !self.status.is_verified()
    }

    pub fn millis(&self) -> u128 {
        match self.status {
            GoalStatus::VerifiedByProver { millis, .. } => millis,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub by_lemma: usize,
    pub by_prover: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn success(&self) -> bool {
        self.entries.iter().all(|e| e.status.is_verified())
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for e in &self.entries {
            match e.status {
                GoalStatus::VerifiedByLemma => s.by_lemma += 1,
                GoalStatus::VerifiedByProver { .. } => s.by_prover += 1,
                GoalStatus::Failed(_) => s.failed += 1,
            }
        }
        s
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("cannot write task dump: {0}")]
    Dump(#[from] std::io::Error),
}

/// Equality problems get a short first attempt with equality as a plain
/// predicate before the complete Brand encoding.
fn prove_native(
    task: &ProofTask,
    chaining: Vec<String>,
    cfg: &VerifyConfig,
) -> (GoalStatus, Option<Refutation>) {
    let start = Instant::now();
    let premises = task.labeled_premises();
    let prover_cfg = |timeout| ProverConfig {
        timeout,
        max_clauses: cfg.max_clauses,
        chaining: chaining.clone(),
        ..ProverConfig::default()
    };
    let mut outcome = None;
    if task.goal.contains_equality() || premises.iter().any(|(_, f)| f.contains_equality()) {
        let cheap = clausify_problem_uninterpreted(&premises, &task.goal);
        let first = prove_with_stats(&cheap.premises, &cheap.goals, &prover_cfg(cfg.timeout / 4));
        if first.verdict.is_proved() {
            outcome = Some(first);
        }
    }
    let outcome = outcome.unwrap_or_else(|| {
        let problem = clausify_problem(&premises, &task.goal);
        prove_with_stats(
            &problem.premises,
            &problem.goals,
            &prover_cfg(cfg.timeout.saturating_sub(start.elapsed())),
        )
    });
    let millis = start.elapsed().as_millis();
    match outcome.verdict {
        Verdict::Proved(r) => match check_refutation(&r) {
            CheckResult::Ok => (
                GoalStatus::VerifiedByProver {
                    prover: "native".into(),
                    millis,
                    checked: true,
                },
                Some(r),
            ),
            CheckResult::BadStep(id) => (
                GoalStatus::Failed(FailReason::Error(format!(
                    "refutation step {id} rejected by the checker"
                ))),
                None,
            ),
        },
        Verdict::Saturated => (GoalStatus::Failed(FailReason::Refuted), None),
        Verdict::TimedOut => (GoalStatus::Failed(FailReason::Timeout), None),
        Verdict::ResourceOut => (
            GoalStatus::Failed(FailReason::Error("clause limit reached".into())),
            None,
        ),
    }
}

fn prove_external(task: &ProofTask, spec: &ExternalProverSpec) -> GoalStatus {
    let start = Instant::now();
    let problem = match write_problem(&task.labeled_premises(), &task.goal) {
        Ok(p) => p,
        Err(e) => return GoalStatus::Failed(FailReason::Error(e.to_string())),
    };
    match run_external(spec, &problem.text) {
        Ok(ExternalVerdict::Proved) => GoalStatus::VerifiedByProver {
            prover: spec.id.clone(),
            millis: start.elapsed().as_millis(),
            checked: false,
        },
        Ok(ExternalVerdict::Saturated) => GoalStatus::Failed(FailReason::Refuted),
        Ok(ExternalVerdict::TimedOut) => GoalStatus::Failed(FailReason::Timeout),
        Ok(ExternalVerdict::Failed(out)) => {
            let last = out
                .lines()
                .rev()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("no output");
            GoalStatus::Failed(FailReason::Error(format!("{}: {last}", spec.id)))
        }
        Err(e) => GoalStatus::Failed(FailReason::Error(e.to_string())),
    }
}

/// A task after the steps that run before any prover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepared {
    /// Expanded and filtered task, transitivity axioms included.
    pub task: ProofTask,
    /// Set when the local lemma pass already discharged the goal.
    pub discharged: bool,
    pub warnings: Vec<String>,
}

/// Definition expansion, the local lemma pass and premise filtering.
pub fn prepare_task(task: &ProofTask, cfg: &VerifyConfig) -> Prepared {
    let mut warnings = Vec::new();
    if let LemmaOutcome::Discharged(_) = local_lemma_pass(task) {
        return Prepared {
            task: task.clone(),
            discharged: true,
            warnings,
        };
    }
    let expansion = expand_definitions(task, &definitions_of(task), cfg.depth);
    if let Some(symbols) = &expansion.cyclic {
        warnings.push(format!(
            "cyclic definition of {} not fully expanded",
            symbols.join(", ")
        ));
    }
    match local_lemma_pass(&expansion.task) {
        LemmaOutcome::Discharged(_) => Prepared {
            task: expansion.task,
            discharged: true,
            warnings,
        },
        LemmaOutcome::Remaining(t) => Prepared {
            task: filter_premises(&t, cfg.filter_k),
            discharged: false,
            warnings,
        },
    }
}

/// The pipeline for one task: [`prepare_task`], then the configured
/// provers in order. With chaining on, the native prover gets the
/// transitive relations as chaining relations instead of their axioms.
pub fn process_task(task: &ProofTask, cfg: &VerifyConfig) -> ReportEntry {
    let prepared = prepare_task(task, cfg);
    let entry = |status, refutation| ReportEntry {
        origin: task.origin,
        kind: task.kind,
        status,
        refutation,
        task: prepared.task.clone(),
        warnings: prepared.warnings.clone(),
    };
    if prepared.discharged {
        return entry(GoalStatus::VerifiedByLemma, None);
    }
    let mut native_task = prepared.task.clone();
    let mut chaining: Vec<String> = Vec::new();
    if cfg.chaining {
        for p in &task.premises {
            if let PremiseRole::Transitivity(rel) = &p.role {
                chaining.push(rel.clone());
            }
        }
        native_task
            .premises
            .retain(|p| !matches!(p.role, PremiseRole::Transitivity(_)));
    }
    let mut last = GoalStatus::Failed(FailReason::Error("no prover configured".into()));
    for backend in &cfg.backends {
        let (status, refutation) = match backend {
            Backend::Native => prove_native(&native_task, chaining.clone(), cfg),
            Backend::External(spec) => (prove_external(&prepared.task, spec), None),
        };
        if status.is_verified() {
            return entry(status, refutation);
        }
        last = status;
    }
    entry(last, None)
}

/// Verifies every goal of the document. Failed goals are still assumed
/// later on, so all tasks are independent and run in parallel; the report
/// keeps document order.
pub fn verify_document(
    doc: &Document,
    vocab: &Vocabulary,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let tasks = build_tasks(doc, vocab)?;
    let entries: Vec<ReportEntry> = tasks.par_iter().map(|t| process_task(t, cfg)).collect();
    if let Some(dir) = &cfg.dump {
        std::fs::create_dir_all(dir)?;
        for (n, e) in entries.iter().enumerate() {
            std::fs::write(dir.join(format!("task_{:03}.txt", n + 1)), e.task.dump())?;
        }
    }
    Ok(VerificationReport { entries })
}
