//! Human-readable proofs: the refutation linearized as numbered steps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ftl_core::fol::ClauseSource;
use ftl_core::prover::{Refutation, Rule};
use ftl_core::verifier::ProofTask;

/// One line per step, `n. <clause> [rule, from i, j]`, in the order of the
/// refutation. Input clauses carry the label of their premise; clauses
/// added by the equality encoding are tagged as such. The empty clause is
/// shown as `contradiction - goal established`.
pub fn render_proof(r: &Refutation, task: &ProofTask) -> String {
    let number: BTreeMap<usize, usize> = r
        .steps
        .iter()
        .enumerate()
        .map(|(n, s)| (s.id, n + 1))
        .collect();
    let mut out = String::new();
    for (n, step) in r.steps.iter().enumerate() {
        let from = |ids: &[usize]| {
            ids.iter()
                .map(|id| number[id].to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let tag = match &step.rule {
            Rule::Input => match &step.clause.source {
                ClauseSource::GoalNegation => "negated goal".to_string(),
                ClauseSource::Premise(label) if task.premises.iter().any(|p| &p.label == label) => {
                    label.clone()
                }
                ClauseSource::Premise(label) => format!("equality {label}"),
                ClauseSource::Derived => "input".to_string(),
            },
            Rule::Resolution {
                parents: (a, b), ..
            } => format!("resolution, from {}", from(&[*a, *b])),
            Rule::Factoring { parent, .. } => format!("factoring, from {}", from(&[*parent])),
            Rule::Chaining {
                relation,
                parents: (a, b),
                ..
            } => {
                format!("chain({relation}), from {}", from(&[*a, *b]))
            }
        };
        let text = if step.clause.is_empty() {
            "contradiction - goal established".to_string()
        } else {
            step.clause.to_string()
        };
        let _ = writeln!(out, "{}. {text} [{tag}]", n + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ftl_core::fol::Formula;
    use ftl_core::prover::{clausify_problem, prove, ProverConfig, Verdict};
    use ftl_core::syntax::SourcePos;
    use ftl_core::verifier::{GoalKind, Hints, Premise, PremiseRole};

    fn task(premises: Vec<(&str, Formula)>, goal: Formula) -> ProofTask {
        ProofTask {
            goal,
            premises: premises
                .into_iter()
                .map(|(l, f)| Premise {
                    label: l.into(),
                    formula: f,
                    role: PremiseRole::Axiom,
                    seq: 0,
                })
                .collect(),
            origin: SourcePos::new(1, 1),
            kind: GoalKind::Claim,
            seq: 1,
            hints: Hints::default(),
        }
    }

    fn refute(t: &ProofTask, cfg: &ProverConfig) -> Refutation {
        let p = clausify_problem(&t.labeled_premises(), &t.goal);
        match prove(&p.premises, &p.goals, cfg) {
            Verdict::Proved(r) => r,
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn p_entails_p() {
        let p = Formula::atom("p", vec![]);
        let t = task(vec![("ax1", p.clone())], p);
        let text = render_proof(&refute(&t, &ProverConfig::default()), &t);
        assert_eq!(text, "1. p [ax1]\n2. ~p [negated goal]\n3. contradiction - goal established [resolution, from 2, 1]\n");
    }

    #[test]
    fn chaining_steps_are_tagged() {
        let lt = |a: &str, b: &str| {
            Formula::atom(
                "lt",
                vec![
                    ftl_core::fol::Term::constant(a),
                    ftl_core::fol::Term::constant(b),
                ],
            )
        };
        let t = task(
            vec![("ab", lt("a", "b")), ("bc", lt("b", "c"))],
            lt("a", "c"),
        );
        let cfg = ProverConfig {
            chaining: vec!["lt".into()],
            ..ProverConfig::default()
        };
        let text = render_proof(&refute(&t, &cfg), &t);
        assert_eq!(
            text,
            "1. lt(a,b) [ab]\n2. lt(b,c) [bc]\n3. ~lt(a,c) [negated goal]\n\
             4. ~lt(b,c) [chain(lt), from 3, 1]\n\
             5. contradiction - goal established [resolution, from 4, 2]\n"
        );
    }
}
