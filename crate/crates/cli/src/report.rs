//! Report rendering: plain text lines and line-delimited JSON records.

use std::fmt::Write as _;

use ftl_core::verifier::{FailReason, GoalStatus, ReportEntry, VerificationReport};
use serde::Serialize;

use crate::render::render_proof;

fn reason(r: &FailReason) -> String {
    match r {
        FailReason::Timeout => "timeout".into(),
        FailReason::Refuted => "refuted".into(),
        FailReason::Error(e) => format!("error: {e}"),
    }
}

fn status_text(status: &GoalStatus) -> String {
    match status {
        GoalStatus::VerifiedByLemma => "verified (lemma pass)".into(),
        GoalStatus::VerifiedByProver {
            prover,
            checked: true,
            ..
        } => format!("verified ({prover}, checked)"),
        GoalStatus::VerifiedByProver { prover, .. } => format!("verified ({prover}, unchecked)"),
        GoalStatus::Failed(r) => format!("FAILED ({}), assumed in what follows", reason(r)),
    }
}

/// Timings are left out so that repeated runs give identical text.
pub fn render_text(file: &str, report: &VerificationReport, proofs: bool) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let _ = writeln!(
            out,
            "{file}:{}: {} {}",
            e.origin,
            e.kind,
            status_text(&e.status)
        );
        for w in &e.warnings {
            let _ = writeln!(out, "{file}:{}: warning: {w}", e.origin);
        }
        if let (true, Some(r)) = (proofs, &e.refutation) {
            for line in render_proof(r, &e.task).lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
    }
    let s = report.summary();
    let _ = writeln!(
        out,
        "{file}: {} goals, {} by lemma pass, {} by prover, {} failed",
        report.entries.len(),
        s.by_lemma,
        s.by_prover,
        s.failed
    );
    out
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct Record<'a> {
    pub file: &'a str,
    pub line: u32,
    pub col: u32,
    pub kind: String,
    /// `verified-by-lemma`, `verified-by-prover` or `failed`.
    pub status: &'static str,
    pub prover: Option<&'a str>,
    pub millis: u128,
    pub checked: bool,
    pub reason: Option<String>,
}

pub fn record<'a>(file: &'a str, e: &'a ReportEntry) -> Record<'a> {
    let (status, prover, checked, why) = match &e.status {
        GoalStatus::VerifiedByLemma => ("verified-by-lemma", None, true, None),
        GoalStatus::VerifiedByProver {
            prover, checked, ..
        } => ("verified-by-prover", Some(prover.as_str()), *checked, None),
        GoalStatus::Failed(r) => ("failed", None, false, Some(reason(r))),
    };
    Record {
        file,
        line: e.origin.line,
        col: e.origin.col,
        kind: e.kind.to_string(),
        status,
        prover,
        millis: e.millis(),
        checked,
        reason: why,
    }
}

/// One JSON object per goal.
pub fn render_structured(file: &str, report: &VerificationReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        out.push_str(&serde_json::to_string(&record(file, e)).expect("records serialize"));
        out.push('\n');
    }
    out
}
