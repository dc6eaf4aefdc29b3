use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::transform::{generate_induction, InductionError};
use super::{GoalKind, Hints, Premise, PremiseRole, ProofTask};
use crate::fol::formula::fresh_name;
use crate::fol::translate::close_declared;
use crate::fol::{translate, Formula, Term, TranslateError};
use crate::syntax::{
    Block, ClaimKind, Document, ProofBlock, SigDecl, SourcePos, Statement, Step, Vocabulary,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{pos}: {source}")]
    Translate {
        pos: SourcePos,
        source: TranslateError,
    },
    #[error("{pos}: {source}")]
    Induction {
        pos: SourcePos,
        source: InductionError,
    },
    #[error("{0}: definition head is not atomic")]
    BadDefinitionHead(SourcePos),
}

/// Variables of the enclosing proofs that stand for fixed constants.
type Scope = BTreeMap<String, Term>;

struct Builder {
    vocab: Vocabulary,
    seq: usize,
    tasks: Vec<ProofTask>,
    used: BTreeSet<String>,
}

fn label(prefix: &str, pos: SourcePos) -> String {
    format!("{prefix}_{}_{}", pos.line, pos.col)
}

fn transitivity(rel: &str) -> Formula {
    let v = |s: &str| Term::var(s);
    let r = |a: &str, b: &str| Formula::atom(rel, vec![v(a), v(b)]);
    Formula::implies(Formula::and(r("x", "y"), r("y", "z")), r("x", "z")).universal_closure()
}

impl Builder {
    fn next_seq(&mut self) -> usize {
        self.seq += 1;
        self.seq
    }

    fn premise(&mut self, label: String, formula: Formula, role: PremiseRole) -> Premise {
        Premise {
            label,
            formula,
            role,
            seq: self.next_seq(),
        }
    }

    fn formula(
        &self,
        stmt: &Statement,
        scope: &Scope,
        pos: SourcePos,
    ) -> Result<Formula, BuildError> {
        let f = translate(stmt, &self.vocab).substitute(scope);
        close_declared(f, &self.vocab, &[]).map_err(|source| BuildError::Translate { pos, source })
    }

    fn emit(
        &mut self,
        goal: Formula,
        premises: &[Premise],
        origin: SourcePos,
        kind: GoalKind,
        hints: Hints,
    ) {
        let seq = self.next_seq();
        self.tasks.push(ProofTask {
            goal,
            premises: premises.to_vec(),
            origin,
            kind,
            seq,
            hints,
        });
    }

    fn fresh_constant(&mut self, var: &str) -> Term {
        let name = fresh_name(var, &self.used);
        self.used.insert(name.clone());
        Term::constant(name)
    }

    /// Emits the tasks for `stmt` and its proof; returns the closed formula
    /// that later goals may use.
    #[allow(clippy::too_many_arguments)]
    fn claim(
        &mut self,
        stmt: &Statement,
        pos: SourcePos,
        proof: Option<&ProofBlock>,
        visible: &[Premise],
        scope: &Scope,
        kind: GoalKind,
        case_hyps: &[String],
    ) -> Result<Formula, BuildError> {
        let closed = self.formula(stmt, scope, pos)?;
        let hints = Hints {
            case_hypotheses: case_hyps.to_vec(),
            ..Hints::default()
        };
        let Some(proof) = proof else {
            self.emit(closed.clone(), visible, pos, kind, hints);
            return Ok(closed);
        };
        let mut local = visible.to_vec();
        let mut inner = scope.clone();
        let goal = match &proof.induction {
            Some(order) => {
                let base = ProofTask {
                    goal: closed.clone(),
                    premises: Vec::new(),
                    origin: pos,
                    kind,
                    seq: 0,
                    hints: Hints::default(),
                };
                let c = self.fresh_constant(match &closed {
                    Formula::Forall(v, _) => v,
                    _ => "c",
                });
                let induced = generate_induction(&base, order, &c)
                    .map_err(|source| BuildError::Induction { pos, source })?;
                let Formula::Implies(guard, _) = &induced.task.goal else {
                    unreachable!("induction goal shape")
                };
                let ih = induced
                    .task
                    .premises
                    .last()
                    .expect("induction hypothesis")
                    .formula
                    .clone();
                let p = self.premise(label("ih", pos), ih, PremiseRole::InductionHypothesis);
                local.push(p);
                let p = self.premise(
                    label("assume", pos),
                    (**guard).clone(),
                    PremiseRole::Assumption,
                );
                local.push(p);
                inner.insert(induced.var, c);
                induced.task.goal
            }
            None => {
                // Variables closed over by their Let declarations become
                // fixed constants for the proof.
                let mut f = closed.clone();
                let free = translate(stmt, &self.vocab).substitute(scope).free_vars();
                for k in 0..free.len() {
                    let Formula::Forall(v, body) = &f else { break };
                    let Formula::Implies(guard, rest) = &**body else {
                        break;
                    };
                    let c = self.fresh_constant(v);
                    let g = guard.substitute_var(v, &c);
                    let rest = rest.substitute_var(v, &c);
                    let p = self.premise(
                        format!("{}_{k}", label("assume", pos)),
                        g,
                        PremiseRole::Assumption,
                    );
                    local.push(p);
                    inner.insert(v.clone(), c);
                    f = rest;
                }
                f
            }
        };
        self.steps(&proof.steps, &mut local, &inner, case_hyps)?;
        let hints = Hints {
            induction: proof.induction.clone(),
            ..hints
        };
        self.emit(goal, &local, pos, kind, hints);
        Ok(closed)
    }

    fn steps(
        &mut self,
        steps: &[Step],
        local: &mut Vec<Premise>,
        scope: &Scope,
        case_hyps: &[String],
    ) -> Result<(), BuildError> {
        let mut i = 0;
        while i < steps.len() {
            match &steps[i] {
                Step::Assert {
                    statement,
                    pos,
                    proof,
                } => {
                    let f = self.claim(
                        statement,
                        *pos,
                        proof.as_ref(),
                        local,
                        scope,
                        GoalKind::Step,
                        case_hyps,
                    )?;
                    let p = self.premise(label("step", *pos), f, PremiseRole::Step);
                    local.push(p);
                    i += 1;
                }
                Step::Case { pos: first, .. } => {
                    let first = *first;
                    let mut hyps = Vec::new();
                    let mut summaries = Vec::new();
                    while let Some(Step::Case {
                        hypothesis,
                        steps: body,
                        pos,
                    }) = steps.get(i)
                    {
                        let h = self.formula(hypothesis, scope, *pos)?;
                        let name = label("case", *pos);
                        let mut inner = local.clone();
                        let p = self.premise(name.clone(), h.clone(), PremiseRole::CaseHypothesis);
                        inner.push(p);
                        let mut hyp_labels = case_hyps.to_vec();
                        hyp_labels.push(name);
                        let before = inner.len();
                        self.steps(body, &mut inner, scope, &hyp_labels)?;
                        let derived: Vec<Formula> =
                            inner[before..].iter().map(|p| p.formula.clone()).collect();
                        if !derived.is_empty() {
                            summaries.push((
                                *pos,
                                Formula::implies(h.clone(), Formula::conjunction(derived)),
                            ));
                        }
                        hyps.push(h);
                        i += 1;
                    }
                    let split = Formula::disjunction(hyps);
                    let hints = Hints {
                        case_hypotheses: case_hyps.to_vec(),
                        ..Hints::default()
                    };
                    self.emit(
                        split.clone(),
                        local,
                        first,
                        GoalKind::CaseCompleteness,
                        hints,
                    );
                    let p = self.premise(label("split", first), split, PremiseRole::CaseSplit);
                    local.push(p);
                    for (pos, s) in summaries {
                        let p = self.premise(label("cased", pos), s, PremiseRole::CaseSummary);
                        local.push(p);
                    }
                }
            }
        }
        Ok(())
    }

    fn definition(
        &mut self,
        head: &Statement,
        body: &Statement,
        params: &[String],
        pos: SourcePos,
    ) -> Result<Premise, BuildError> {
        let head = translate(head, &self.vocab);
        let Formula::Atom(atom) = &head else {
            return Err(BuildError::BadDefinitionHead(pos));
        };
        let symbol = atom.pred.clone();
        let body = close_declared(translate(body, &self.vocab), &self.vocab, params)
            .map_err(|source| BuildError::Translate { pos, source })?;
        let f = params
            .iter()
            .rev()
            .fold(Formula::iff(head.clone(), body), |acc, v| {
                Formula::forall(v.clone(), acc)
            });
        Ok(self.premise(label("def", pos), f, PremiseRole::Definition(symbol)))
    }
}

/// One task per goal sentence, in document order. `vocab` is the
/// vocabulary returned by the parser for `doc`.
pub fn build_tasks(doc: &Document, vocab: &Vocabulary) -> Result<Vec<ProofTask>, BuildError> {
    let mut used: BTreeSet<String> = vocab.patterns().iter().map(|p| p.symbol.clone()).collect();
    used.extend(vocab.relations().map(|r| r.symbol.clone()));
    let mut b = Builder {
        vocab: vocab.clone(),
        seq: 0,
        tasks: Vec::new(),
        used,
    };
    let mut visible: Vec<Premise> = Vec::new();
    let scope = Scope::new();
    for block in &doc.blocks {
        match block {
            Block::Signature { decls, .. } => {
                for d in decls {
                    match d {
                        SigDecl::Let { vars, notion } => {
                            b.vocab = b.vocab.declare_vars(vars, notion)
                        }
                        SigDecl::Relation {
                            symbol,
                            transitive: true,
                            ..
                        } => {
                            let p = b.premise(
                                format!("trans_{}", visible.len()),
                                transitivity(symbol),
                                PremiseRole::Transitivity(symbol.clone()),
                            );
                            visible.push(p);
                        }
                        _ => {}
                    }
                }
            }
            Block::Definition { definition, pos } => {
                let p =
                    b.definition(&definition.head, &definition.body, &definition.params, *pos)?;
                visible.push(p);
            }
            Block::Axiom { statement, pos } => {
                let f = b.formula(statement, &scope, *pos)?;
                let p = b.premise(label("axiom", *pos), f, PremiseRole::Axiom);
                visible.push(p);
            }
            Block::Claim {
                kind,
                statement,
                proof,
                pos,
            } => {
                let f = b.claim(
                    statement,
                    *pos,
                    proof.as_ref(),
                    &visible,
                    &scope,
                    GoalKind::Claim,
                    &[],
                )?;
                let prefix = match kind {
                    ClaimKind::Theorem => "theorem",
                    ClaimKind::Lemma => "lemma",
                    ClaimKind::Proposition => "proposition",
                };
                let p = b.premise(label(prefix, *pos), f, PremiseRole::Claim);
                visible.push(p);
            }
        }
    }
    Ok(b.tasks)
}
