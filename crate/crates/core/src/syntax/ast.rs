use super::token::SourcePos;
use super::vocab::PatternId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Every,
    Some,
    No,
}

impl Quantifier {
    pub fn word(self) -> &'static str {
        match self {
            Quantifier::Every => "every",
            Quantifier::Some => "some",
            Quantifier::No => "no",
        }
    }
}

/// A term as written in the text: a variable or an instance of a function
/// pattern such as `the successor of x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceTerm {
    Var(String),
    App(PatternId, Vec<SurfaceTerm>),
}

/// `adjectives* notion [name] dependent-args`, e.g. `prime number p` or
/// `subgroup H of G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NotionPhrase {
    pub notion: PatternId,
    pub adjectives: Vec<PatternId>,
    pub var: Option<String>,
    pub args: Vec<SurfaceTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Quantified {
        quantifier: Quantifier,
        notion: NotionPhrase,
        scope: Box<Statement>,
    },
    Predicate {
        pattern: PatternId,
        args: Vec<SurfaceTerm>,
    },
    IsNotion {
        subject: SurfaceTerm,
        notion: NotionPhrase,
    },
    HasAdjective {
        subject: SurfaceTerm,
        adjective: PatternId,
        args: Vec<SurfaceTerm>,
    },
    /// Symbolic atom `lhs REL rhs`; `=` and `!=` are built in.
    Relation {
        symbol: String,
        lhs: SurfaceTerm,
        rhs: SurfaceTerm,
    },
    And(Box<Statement>, Box<Statement>),
    Or(Box<Statement>, Box<Statement>),
    Implies(Box<Statement>, Box<Statement>),
    Iff(Box<Statement>, Box<Statement>),
    Not(Box<Statement>),
}

impl Statement {
    pub fn and(a: Statement, b: Statement) -> Statement {
        Statement::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Statement) -> Statement {
        Statement::Not(Box::new(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclElem {
    Word(String),
    Slot(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigDecl {
    /// A notion, adjective, predicate, function or constant pattern with
    /// its alternative word forms (e.g. singular and plural).
    Pattern {
        id: PatternId,
        forms: Vec<Vec<DeclElem>>,
    },
    Relation {
        symbol: String,
        lhs: String,
        rhs: String,
        transitive: bool,
        wellfounded: bool,
    },
    /// `Let x, y denote numbers.`
    Let {
        vars: Vec<String>,
        notion: NotionPhrase,
    },
}

/// What a definition defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definiendum {
    Pattern(PatternId),
    Relation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    /// Atomic statement whose arguments are distinct variables.
    pub head: Statement,
    pub body: Statement,
    pub defines: Definiendum,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimKind {
    Theorem,
    Lemma,
    Proposition,
}

impl ClaimKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ClaimKind::Theorem => "Theorem",
            ClaimKind::Lemma => "Lemma",
            ClaimKind::Proposition => "Proposition",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofBlock {
    /// Relation symbol of the well-founded order for `Proof by induction`.
    pub induction: Option<String>,
    pub steps: Vec<Step>,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Assert {
        statement: Statement,
        pos: SourcePos,
        proof: Option<ProofBlock>,
    },
    Case {
        hypothesis: Statement,
        steps: Vec<Step>,
        pos: SourcePos,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Signature {
        decls: Vec<SigDecl>,
        pos: SourcePos,
    },
    Definition {
        definition: Definition,
        pos: SourcePos,
    },
    Axiom {
        statement: Statement,
        pos: SourcePos,
    },
    Claim {
        kind: ClaimKind,
        statement: Statement,
        proof: Option<ProofBlock>,
        pos: SourcePos,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    /// Copy with every source position zeroed, for structural comparison.
    pub fn without_positions(&self) -> Document {
        fn proof(p: &ProofBlock) -> ProofBlock {
            ProofBlock {
                induction: p.induction.clone(),
                steps: steps(&p.steps),
                pos: SourcePos::default(),
            }
        }
        fn steps(s: &[Step]) -> Vec<Step> {
            s.iter()
                .map(|s| match s {
                    Step::Assert {
                        statement,
                        proof: p,
                        ..
                    } => Step::Assert {
                        statement: statement.clone(),
                        pos: SourcePos::default(),
                        proof: p.as_ref().map(proof),
                    },
                    Step::Case {
                        hypothesis,
                        steps: inner,
                        ..
                    } => Step::Case {
                        hypothesis: hypothesis.clone(),
                        steps: steps(inner),
                        pos: SourcePos::default(),
                    },
                })
                .collect()
        }
        let zero = SourcePos::default();
        Document {
            blocks: self
                .blocks
                .iter()
                .map(|b| match b {
                    Block::Signature { decls, .. } => Block::Signature {
                        decls: decls.clone(),
                        pos: zero,
                    },
                    Block::Definition { definition, .. } => Block::Definition {
                        definition: definition.clone(),
                        pos: zero,
                    },
                    Block::Axiom { statement, .. } => Block::Axiom {
                        statement: statement.clone(),
                        pos: zero,
                    },
                    Block::Claim {
                        kind,
                        statement,
                        proof: p,
                        ..
                    } => Block::Claim {
                        kind: *kind,
                        statement: statement.clone(),
                        proof: p.as_ref().map(proof),
                        pos: zero,
                    },
                })
                .collect(),
        }
    }
}
