//! Given-clause resolution prover for equality-free clause sets, with set
//! of support, subsumption and a chaining rule for transitive relations.

pub mod inference;
pub mod problem;
pub mod refutation;

use std::collections::{BTreeSet, HashSet};
use std::hash::{Hash, Hasher};
use std::time::{Duration, Instant};

use crate::fol::{Clause, ClauseSource};
use inference::{chain_renamed, factor, rename_apart, resolve_renamed, subsumes, ChainKind};
pub use problem::{clausify_problem, clausify_problem_uninterpreted, ClauseProblem};
pub use refutation::{check_refutation, CheckResult, Refutation, Rule, Step};

/// Literal selection policy. Only unrestricted selection is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    #[default]
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProverConfig {
    pub timeout: Duration,
    pub max_clauses: usize,
    /// Clauses heavier than this are discarded. `None` is the complete
    /// configuration, the only one that may report `Saturated`.
    pub max_weight: Option<usize>,
    /// Transitive relations handled by the chaining rule.
    pub chaining: Vec<String>,
    pub selection: Selection,
    /// Restrict inferences to descendants of the goal clauses.
    pub set_of_support: bool,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            timeout: Duration::from_secs(10),
            max_clauses: 200_000,
            max_weight: None,
            chaining: Vec::new(),
            selection: Selection::All,
            set_of_support: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proved(Refutation),
    Saturated,
    TimedOut,
    ResourceOut,
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProofStats {
    /// Conclusions produced by inference rules.
    pub generated: usize,
    /// Clauses kept in the clause store, inputs included.
    pub retained: usize,
    /// Given-clause iterations.
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    pub stats: ProofStats,
}

struct Entry {
    clause: Clause,
    rule: Rule,
    /// Features of the clause as a subsumption target.
    features: u64,
    /// Features any target of this clause must have.
    required: u64,
}

fn feature_bit(positive: bool, pred: &str, arg: Option<(usize, &str)>) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (positive, pred, arg).hash(&mut h);
    1 << (h.finish() % 64)
}

/// Bloom-style prefilter for subsumption: `c` can subsume `d` only if
/// `required(c) & !features(d) == 0`.
fn features(c: &Clause) -> (u64, u64) {
    let (mut have, mut need) = (0, 0);
    for l in &c.literals {
        let base = feature_bit(l.positive, &l.atom.pred, None);
        have |= base;
        need |= base;
        for (k, t) in l.atom.args.iter().enumerate() {
            if let crate::fol::Term::App(f, _) = t {
                let bit = feature_bit(l.positive, &l.atom.pred, Some((k, f)));
                have |= bit;
                need |= bit;
            }
        }
    }
    (have, need)
}

struct Search<'a> {
    cfg: &'a ProverConfig,
    store: Vec<Entry>,
    active: Vec<usize>,
    by_weight: BTreeSet<(usize, usize)>,
    by_age: BTreeSet<usize>,
    /// Variable-normalized literals of every retained clause.
    seen: HashSet<Vec<crate::fol::Literal>>,
    capped: bool,
    stats: ProofStats,
    deadline: Instant,
}

enum Event {
    Empty(usize),
    Full,
    Continue,
}

/// Weight picks per age pick: one weight pick for every four age picks.
const PICK_CYCLE: usize = 5;

impl<'a> Search<'a> {
    fn push(&mut self, clause: Clause, rule: Rule) -> Event {
        let id = self.store.len();
        let empty = clause.is_empty();
        let (features, required) = features(&clause);
        self.store.push(Entry {
            clause,
            rule,
            features,
            required,
        });
        self.stats.retained += 1;
        if empty {
            return Event::Empty(id);
        }
        if self.store.len() > self.cfg.max_clauses {
            return Event::Full;
        }
        Event::Continue
    }

    fn make_passive(&mut self, id: usize) {
        self.by_weight.insert((self.store[id].clause.weight(), id));
        self.by_age.insert(id);
    }

    fn pick(&mut self) -> Option<usize> {
        let by_weight = self.stats.iterations.is_multiple_of(PICK_CYCLE);
        let id = if by_weight {
            self.by_weight.first().map(|&(_, id)| id)
        } else {
            self.by_age.first().copied()
        }?;
        self.by_weight.remove(&(self.store[id].clause.weight(), id));
        self.by_age.remove(&id);
        Some(id)
    }

    fn subsumed_by(&self, id: usize, c: &Clause, have: u64) -> bool {
        let e = &self.store[id];
        e.required & !have == 0 && subsumes(&e.clause, c)
    }

    /// Forward subsumption by active clauses plus a duplicate check against
    /// everything retained. Passive clauses are checked again when picked.
    fn redundant(&mut self, c: &Clause) -> bool {
        if !self.seen.insert(c.normalized().literals) {
            return true;
        }
        let (have, _) = features(c);
        self.active.iter().any(|&id| self.subsumed_by(id, c, have))
    }

    fn conclusions(&self, g: usize) -> Vec<(Clause, Rule)> {
        let mut out = Vec::new();
        let given = &self.store[g].clause;
        for &a in &self.active {
            let other = &self.store[a].clause;
            let shares = given.literals.iter().any(|li| {
                other.literals.iter().any(|lj| {
                    li.atom.pred == lj.atom.pred && li.atom.args.len() == lj.atom.args.len()
                })
            });
            if !shares {
                continue;
            }
            // renamed copies for the two parent orders, as the checker builds them
            let other_r = rename_apart(given, other);
            let given_r = rename_apart(other, given);
            for (i, li) in given.literals.iter().enumerate() {
                for (j, lj) in other.literals.iter().enumerate() {
                    if li.atom.pred != lj.atom.pred || li.atom.args.len() != lj.atom.args.len() {
                        continue;
                    }
                    if li.positive != lj.positive {
                        if let Ok((c, unifier)) = resolve_renamed(given, &other_r, i, j) {
                            out.push((
                                c,
                                Rule::Resolution {
                                    parents: (g, a),
                                    literals: (i, j),
                                    unifier,
                                },
                            ));
                        }
                    }
                    if !self.cfg.chaining.contains(&li.atom.pred) || li.atom.args.len() != 2 {
                        continue;
                    }
                    let rel = li.atom.pred.as_str();
                    let mut attempt =
                        |first_is_given: bool, i: usize, j: usize, kind: ChainKind| {
                            let (c1, c2, x, yr) = if first_is_given {
                                (g, a, given, &other_r)
                            } else {
                                (a, g, other, &given_r)
                            };
                            if let Ok((c, unifier)) = chain_renamed(x, yr, i, j, rel, kind) {
                                let rule = Rule::Chaining {
                                    relation: rel.to_string(),
                                    kind,
                                    parents: (c1, c2),
                                    literals: (i, j),
                                    unifier,
                                };
                                out.push((c, rule));
                            }
                        };
                    match (li.positive, lj.positive) {
                        (true, true) => {
                            attempt(true, i, j, ChainKind::Forward);
                            if a != g {
                                attempt(false, j, i, ChainKind::Forward);
                            }
                        }
                        (false, true) => {
                            attempt(true, i, j, ChainKind::Left);
                            attempt(true, i, j, ChainKind::Right);
                        }
                        (true, false) => {
                            attempt(false, j, i, ChainKind::Left);
                            attempt(false, j, i, ChainKind::Right);
                        }
                        (false, false) => {}
                    }
                }
            }
        }
        for i in 0..given.len() {
            for j in i + 1..given.len() {
                if let Ok((c, unifier)) = factor(given, i, j) {
                    out.push((
                        c,
                        Rule::Factoring {
                            parent: g,
                            literals: (i, j),
                            unifier,
                        },
                    ));
                }
            }
        }
        out
    }

    fn refutation(&self, sink: usize) -> Refutation {
        let mut keep = BTreeSet::new();
        let mut todo = vec![sink];
        while let Some(id) = todo.pop() {
            if keep.insert(id) {
                todo.extend(self.store[id].rule.parents());
            }
        }
        Refutation {
            steps: keep
                .into_iter()
                .map(|id| Step {
                    id,
                    rule: self.store[id].rule.clone(),
                    clause: self.store[id].clause.clone(),
                })
                .collect(),
        }
    }

    fn finish(&self, verdict: Verdict) -> ProofOutcome {
        ProofOutcome {
            verdict,
            stats: self.stats,
        }
    }
}

/// Saturates `premises ∪ goals`. With set of support, the goal clauses
/// (normally the clausified negated goal) start passive and the premises
/// start active, so every inference involves a descendant of a goal clause.
pub fn prove_with_stats(premises: &[Clause], goals: &[Clause], cfg: &ProverConfig) -> ProofOutcome {
    let mut s = Search {
        cfg,
        store: Vec::new(),
        active: Vec::new(),
        by_weight: BTreeSet::new(),
        by_age: BTreeSet::new(),
        seen: HashSet::new(),
        capped: false,
        stats: ProofStats::default(),
        deadline: Instant::now() + cfg.timeout,
    };
    let inputs = premises
        .iter()
        .map(|c| (c, false))
        .chain(goals.iter().map(|c| (c, true)));
    for (clause, is_goal) in inputs {
        let c = Clause {
            literals: clause.normalized().literals,
            source: clause.source.clone(),
        };
        if c.is_tautology() {
            continue;
        }
        match s.push(c, Rule::Input) {
            Event::Empty(id) => return s.finish(Verdict::Proved(s.refutation(id))),
            Event::Full => return s.finish(Verdict::ResourceOut),
            Event::Continue => {}
        }
        let id = s.store.len() - 1;
        if is_goal || !cfg.set_of_support {
            s.make_passive(id);
        } else {
            s.active.push(id);
        }
    }

    loop {
        if Instant::now() >= s.deadline {
            return s.finish(Verdict::TimedOut);
        }
        let Some(g) = s.pick() else {
            let verdict = if cfg.max_weight.is_none() && !s.capped {
                Verdict::Saturated
            } else {
                Verdict::ResourceOut
            };
            return s.finish(verdict);
        };
        s.stats.iterations += 1;
        let given = s.store[g].clause.clone();
        let (have, need) = features(&given);
        if s.active.iter().any(|&a| s.subsumed_by(a, &given, have)) {
            continue;
        }
        let store = &s.store;
        s.active
            .retain(|&a| !(need & !store[a].features == 0 && subsumes(&given, &store[a].clause)));
        s.active.push(g);

        for (n, (clause, rule)) in s.conclusions(g).into_iter().enumerate() {
            s.stats.generated += 1;
            if n % 64 == 63 && Instant::now() >= s.deadline {
                return s.finish(Verdict::TimedOut);
            }
            if clause.is_empty() {
                let Event::Empty(id) = s.push(clause, rule) else {
                    unreachable!()
                };
                return s.finish(Verdict::Proved(s.refutation(id)));
            }
            if clause.is_tautology() {
                continue;
            }
            if cfg.max_weight.is_some_and(|w| clause.weight() > w) {
                s.capped = true;
                continue;
            }
            if s.redundant(&clause) {
                continue;
            }
            let clause = clause.with_source(ClauseSource::Derived);
            match s.push(clause, rule) {
                Event::Full => return s.finish(Verdict::ResourceOut),
                _ => {
                    let id = s.store.len() - 1;
                    s.make_passive(id);
                }
            }
        }
    }
}

pub fn prove(premises: &[Clause], goals: &[Clause], cfg: &ProverConfig) -> Verdict {
    prove_with_stats(premises, goals, cfg).verdict
}
