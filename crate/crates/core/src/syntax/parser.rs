//! Recursive-descent parser for texts and statements.
//!
//! Pattern alternatives are resolved by longest match; ties go to the
//! earliest registered pattern. On failure the error reports the farthest
//! position reached together with everything that was expected there.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::*;
use super::token::{LexError, SourcePos, Token, TokenKind};
use super::vocab::{PatternId, PatternKind, Shape, ShapeElem, VocabError, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{pos}: syntax error: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        pos: SourcePos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: unknown pattern `{phrase}`")]
    UnknownPattern { pos: SourcePos, phrase: String },
    #[error("{pos}: variable `{name}` is neither bound nor declared")]
    UndeclaredVariable { pos: SourcePos, name: String },
    #[error("{pos}: {error}")]
    Vocabulary { pos: SourcePos, error: VocabError },
    #[error("{pos}: proof by induction needs a declared wellfounded relation")]
    NoInductionOrder { pos: SourcePos },
}

impl ParseError {
    pub fn pos(&self) -> SourcePos {
        match self {
            ParseError::Lex(e) => e.pos(),
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownPattern { pos, .. }
            | ParseError::UndeclaredVariable { pos, .. }
            | ParseError::Vocabulary { pos, .. }
            | ParseError::NoInductionOrder { pos } => *pos,
        }
    }

    /// The expected token classes, for syntax errors.
    pub fn expected(&self) -> &[String] {
        match self {
            ParseError::Syntax { expected, .. } => expected,
            _ => &[],
        }
    }
}

/// Parses a whole text, growing the vocabulary block by block.
pub fn parse_document(
    tokens: &[Token],
    vocab: &Vocabulary,
) -> Result<(Document, Vocabulary), ParseError> {
    let mut p = Parser::new(tokens, vocab.clone());
    let doc = p.document()?;
    Ok((doc, p.vocab))
}

/// Parses a single statement, optionally terminated by a period. Free
/// variables are accepted without declaration.
pub fn parse_statement(tokens: &[Token], vocab: &Vocabulary) -> Result<Statement, ParseError> {
    let mut p = Parser::new(tokens, vocab.clone());
    p.lenient = Some(Vec::new());
    let st = p.statement();
    match st {
        Some(st) => {
            if p.peek().is_some_and(|t| t.kind == TokenKind::Period) {
                p.i += 1;
            }
            if p.i < tokens.len() {
                p.note("end of statement");
                return Err(p.error());
            }
            Ok(st)
        }
        None => Err(p.error()),
    }
}

#[derive(Debug, Default, Clone)]
enum Special {
    #[default]
    None,
    Unknown(String),
    Undeclared(String),
}

#[derive(Debug, Default, Clone)]
struct Failure {
    at: usize,
    expected: BTreeSet<String>,
    special: Special,
}

#[derive(Debug, Clone)]
struct Matched {
    args: Vec<SurfaceTerm>,
    lifted: Vec<(Quantifier, NotionPhrase)>,
    name: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SlotMode {
    Term,
    Object,
}

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    vocab: Vocabulary,
    bound: Vec<String>,
    free: Vec<String>,
    /// When set, undeclared variables are accepted and recorded here.
    lenient: Option<Vec<String>>,
    fresh: usize,
    taken: BTreeSet<String>,
    fail: Failure,
}

fn quantifier_of(t: &Token) -> Option<Quantifier> {
    if t.kind != TokenKind::Word {
        return None;
    }
    match t.text.to_lowercase().as_str() {
        "every" | "all" | "each" | "any" => Some(Quantifier::Every),
        "some" | "a" | "an" => Some(Quantifier::Some),
        "no" => Some(Quantifier::No),
        _ => None,
    }
}

const KIND_WORDS: &[&str] = &[
    "notion",
    "adjective",
    "predicate",
    "function",
    "constant",
    "relation",
];

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], vocab: Vocabulary) -> Self {
        let taken = toks
            .iter()
            .filter(|t| t.kind == TokenKind::Variable)
            .map(|t| t.text.clone())
            .collect();
        Parser {
            toks,
            i: 0,
            vocab,
            bound: Vec::new(),
            free: Vec::new(),
            lenient: None,
            fresh: 0,
            taken,
            fail: Failure::default(),
        }
    }

    // ---- token helpers ----

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.i)
    }

    fn at_word(&self, w: &str) -> bool {
        self.peek().is_some_and(|t| t.is_word(w))
    }

    fn at_keyword(&self, k: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.i += 1;
            true
        } else {
            self.note(&format!("'{w}'"));
            false
        }
    }

    fn eat_kind(&mut self, kind: TokenKind, what: &str) -> Option<&'a Token> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.i += 1;
                Some(t)
            }
            _ => {
                self.note(what);
                None
            }
        }
    }

    fn eat_period(&mut self) -> bool {
        self.eat_kind(TokenKind::Period, "'.'").is_some()
    }

    fn eat_symbol(&mut self, s: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_symbol(s)) {
            self.i += 1;
            true
        } else {
            self.note(&format!("'{s}'"));
            false
        }
    }

    fn pos_of(&self, idx: usize) -> SourcePos {
        match self.toks.get(idx) {
            Some(t) => t.pos,
            None => match self.toks.last() {
                Some(t) => SourcePos::new(t.pos.line, t.pos.col + t.text.chars().count() as u32),
                None => SourcePos::new(1, 1),
            },
        }
    }

    fn pos(&self) -> SourcePos {
        self.pos_of(self.i)
    }

    // ---- failure tracking ----

    fn note(&mut self, what: &str) {
        if self.i > self.fail.at
            || (self.fail.expected.is_empty() && matches!(self.fail.special, Special::None))
        {
            self.fail = Failure {
                at: self.i,
                expected: BTreeSet::new(),
                special: Special::None,
            };
        }
        if self.i == self.fail.at {
            self.fail.expected.insert(what.to_string());
        }
    }

    fn note_special(&mut self, special: Special) {
        if self.i >= self.fail.at
            || (self.fail.expected.is_empty() && matches!(self.fail.special, Special::None))
        {
            if self.i > self.fail.at {
                self.fail.expected.clear();
            }
            self.fail.at = self.i;
            self.fail.special = special;
        }
    }

    fn reset_failure(&mut self) {
        self.fail = Failure {
            at: self.i,
            expected: BTreeSet::new(),
            special: Special::None,
        };
    }

    fn error(&self) -> ParseError {
        let at = self.fail.at;
        let pos = self.pos_of(at);
        match &self.fail.special {
            Special::Unknown(phrase) => ParseError::UnknownPattern {
                pos,
                phrase: phrase.clone(),
            },
            Special::Undeclared(name) => ParseError::UndeclaredVariable {
                pos,
                name: name.clone(),
            },
            Special::None => ParseError::Syntax {
                pos,
                expected: self.fail.expected.iter().cloned().collect(),
                found: self
                    .toks
                    .get(at)
                    .map_or("end of input".to_string(), |t| format!("`{}`", t.text)),
            },
        }
    }

    fn fresh_var(&mut self) -> String {
        loop {
            self.fresh += 1;
            let name = format!("v_{}", self.fresh);
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }

    // ---- document structure ----

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut blocks = Vec::new();
        while let Some(tok) = self.peek() {
            self.reset_failure();
            let pos = tok.pos;
            let block = if tok.is_keyword("Signature") {
                self.i += 1;
                self.expect_period()?;
                Block::Signature {
                    decls: self.signature()?,
                    pos,
                }
            } else if tok.is_keyword("Definition") {
                self.i += 1;
                self.expect_period()?;
                let pos = self.pos();
                Block::Definition {
                    definition: self.definition()?,
                    pos,
                }
            } else if tok.is_keyword("Axiom") {
                self.i += 1;
                self.expect_period()?;
                let pos = self.pos();
                Block::Axiom {
                    statement: self.sentence()?,
                    pos,
                }
            } else if let Some(kind) = claim_kind(tok) {
                self.i += 1;
                self.expect_period()?;
                let pos = self.pos();
                let statement = self.sentence()?;
                let proof = if self.at_keyword("Proof") {
                    Some(self.proof(&statement)?)
                } else {
                    None
                };
                Block::Claim {
                    kind,
                    statement,
                    proof,
                    pos,
                }
            } else {
                self.note("block keyword");
                return Err(self.error());
            };
            blocks.push(block);
        }
        Ok(Document { blocks })
    }

    fn expect_period(&mut self) -> Result<(), ParseError> {
        if self.eat_period() {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn sentence(&mut self) -> Result<Statement, ParseError> {
        self.reset_failure();
        let st = self.statement().ok_or_else(|| self.error())?;
        self.expect_period()?;
        Ok(st)
    }

    fn at_block_end(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => t.kind == TokenKind::BlockKeyword,
        }
    }

    fn signature(&mut self) -> Result<Vec<SigDecl>, ParseError> {
        let mut decls = Vec::new();
        while !self.at_block_end() {
            self.reset_failure();
            let decl = if self.at_word("let") {
                self.let_decl()?
            } else {
                self.pattern_decl()?
            };
            decls.push(decl);
        }
        if decls.is_empty() {
            self.note("declaration");
            return Err(self.error());
        }
        Ok(decls)
    }

    fn let_decl(&mut self) -> Result<SigDecl, ParseError> {
        self.i += 1;
        let mut vars = Vec::new();
        loop {
            let v = self
                .eat_kind(TokenKind::Variable, "variable")
                .ok_or_else(|| self.error())?;
            vars.push(v.text.clone());
            if self.peek().is_some_and(|t| t.kind == TokenKind::Comma) {
                self.i += 1;
            } else {
                break;
            }
        }
        if self.at_word("stand") {
            self.i += 1;
            if !self.eat_word("for") {
                return Err(self.error());
            }
        } else if !self.eat_word("denote") {
            return Err(self.error());
        }
        if self.at_word("a") || self.at_word("an") {
            self.i += 1;
        }
        let notion = self.notion_phrase(false).ok_or_else(|| self.error())?;
        self.expect_period()?;
        self.vocab = self.vocab.declare_vars(&vars, &notion);
        Ok(SigDecl::Let { vars, notion })
    }

    fn pattern_decl(&mut self) -> Result<SigDecl, ParseError> {
        let start = self.i;
        let start_pos = self.pos();
        let Some(end) = (start..self.toks.len()).find(|&j| self.toks[j].kind == TokenKind::Period)
        else {
            self.i = self.toks.len();
            self.note("'.'");
            return Err(self.error());
        };
        let toks = &self.toks[start..end];
        let bad = |p: &mut Parser, at: usize| {
            p.i = at;
            p.note("pattern declaration");
            p.error()
        };

        // `<shape> is a|an [modifiers] <kind>`
        let Some(kind_tok) = toks.last().filter(|t| t.kind == TokenKind::Word) else {
            return Err(bad(self, end));
        };
        let kind_word = kind_tok.text.to_lowercase();
        if !KIND_WORDS.contains(&kind_word.as_str()) {
            return Err(bad(self, end - 1));
        }
        let mut k = toks.len() - 1;
        let (mut transitive, mut wellfounded) = (false, false);
        while k > 0 && (toks[k - 1].is_word("transitive") || toks[k - 1].is_word("wellfounded")) {
            transitive |= toks[k - 1].is_word("transitive");
            wellfounded |= toks[k - 1].is_word("wellfounded");
            k -= 1;
        }
        if (transitive || wellfounded) && kind_word != "relation" {
            return Err(bad(self, start + k));
        }
        if k < 2
            || !(toks[k - 1].is_word("a") || toks[k - 1].is_word("an"))
            || !toks[k - 2].is_word("is")
        {
            return Err(bad(self, start + k.saturating_sub(1)));
        }
        let shape_toks = &toks[..k - 2];
        if shape_toks.is_empty() {
            return Err(bad(self, start));
        }

        if kind_word == "relation" {
            let ok = shape_toks.len() == 3
                && shape_toks[0].kind == TokenKind::Variable
                && shape_toks[1].kind == TokenKind::Symbol
                && shape_toks[2].kind == TokenKind::Variable
                && !matches!(shape_toks[1].text.as_str(), "(" | ")" | "/");
            if !ok {
                return Err(bad(self, start));
            }
            let symbol = shape_toks[1].text.clone();
            self.vocab = self
                .vocab
                .register_relation(&symbol, transitive, wellfounded)
                .map_err(|error| ParseError::Vocabulary {
                    pos: start_pos,
                    error,
                })?;
            self.i = end + 1;
            return Ok(SigDecl::Relation {
                symbol,
                lhs: shape_toks[0].text.clone(),
                rhs: shape_toks[2].text.clone(),
                transitive,
                wellfounded,
            });
        }

        let kind = match kind_word.as_str() {
            "notion" => PatternKind::Notion,
            "adjective" => PatternKind::Adjective,
            "predicate" => PatternKind::Predicate,
            _ => PatternKind::Function,
        };
        let mut forms: Vec<Vec<DeclElem>> = Vec::new();
        for (n, chunk) in shape_toks.split(|t| t.is_symbol("/")).enumerate() {
            let mut chunk = chunk;
            if n == 0 && kind == PatternKind::Notion {
                if let Some(first) = chunk.first() {
                    if first.is_word("a") || first.is_word("an") {
                        chunk = &chunk[1..];
                    }
                }
            }
            let mut form = Vec::new();
            for t in chunk {
                match t.kind {
                    TokenKind::Word => form.push(DeclElem::Word(t.text.to_lowercase())),
                    TokenKind::Variable => form.push(DeclElem::Slot(t.text.clone())),
                    _ => return Err(bad(self, start + offset_in(self.toks, start, t))),
                }
            }
            if form.is_empty() {
                return Err(bad(self, start));
            }
            forms.push(form);
        }
        if kind_word == "constant"
            && forms
                .iter()
                .flatten()
                .any(|e| matches!(e, DeclElem::Slot(_)))
        {
            return Err(bad(self, start));
        }
        let shapes: Vec<Shape> = forms.iter().map(|f| decl_shape(f)).collect();
        let (vocab, id) =
            self.vocab
                .register_pattern(kind, shapes)
                .map_err(|error| ParseError::Vocabulary {
                    pos: start_pos,
                    error,
                })?;
        self.vocab = vocab;
        self.i = end + 1;
        Ok(SigDecl::Pattern { id, forms })
    }

    fn definition(&mut self) -> Result<Definition, ParseError> {
        let start = self.i;
        let Some(iff_at) = (start..self.toks.len())
            .take_while(|&j| self.toks[j].kind != TokenKind::Period)
            .find(|&j| self.toks[j].is_word("iff"))
        else {
            let end = (start..self.toks.len())
                .find(|&j| self.toks[j].kind == TokenKind::Period)
                .unwrap_or(self.toks.len());
            self.i = end;
            self.note("'iff'");
            return Err(self.error());
        };

        let (head, params) = match self.definition_head(iff_at) {
            Some(found) => found,
            None => {
                self.register_head_pattern(start, iff_at)?;
                self.i = start;
                self.reset_failure();
                self.definition_head(iff_at).ok_or_else(|| self.error())?
            }
        };
        let defines = match &head {
            Statement::Predicate { pattern, .. }
            | Statement::HasAdjective {
                adjective: pattern, ..
            } => Definiendum::Pattern(*pattern),
            Statement::IsNotion { notion, .. } => Definiendum::Pattern(notion.notion),
            Statement::Relation { symbol, .. } => Definiendum::Relation(symbol.clone()),
            _ => unreachable!("definition_head only returns atoms"),
        };
        self.i = iff_at + 1;
        self.reset_failure();
        let saved_free = self.free.len();
        self.free.extend(params.iter().cloned());
        let body = self.statement();
        self.free.truncate(saved_free);
        let body = body.ok_or_else(|| self.error())?;
        self.expect_period()?;
        Ok(Definition {
            head,
            body,
            defines,
            params,
        })
    }

    /// Parses `toks[i..iff_at]` as an atom over distinct variables.
    fn definition_head(&mut self, iff_at: usize) -> Option<(Statement, Vec<String>)> {
        let start = self.i;
        self.lenient = Some(Vec::new());
        let parsed = self.simple();
        let seen = self.lenient.take().unwrap_or_default();
        let head = parsed.filter(|_| self.i == iff_at);
        let Some(head) = head else {
            self.i = start;
            return None;
        };
        let args: Vec<&SurfaceTerm> = match &head {
            Statement::Predicate { args, .. } => args.iter().collect(),
            Statement::HasAdjective { subject, args, .. } => {
                std::iter::once(subject).chain(args).collect()
            }
            Statement::IsNotion { subject, notion } if notion.adjectives.is_empty() => {
                std::iter::once(subject).chain(&notion.args).collect()
            }
            Statement::Relation { symbol, lhs, rhs } if !matches!(symbol.as_str(), "=" | "!=") => {
                vec![lhs, rhs]
            }
            _ => {
                self.i = start;
                return None;
            }
        };
        let mut params = Vec::new();
        for a in args {
            match a {
                SurfaceTerm::Var(v) if !params.contains(v) => params.push(v.clone()),
                _ => {
                    self.i = start;
                    return None;
                }
            }
        }
        debug_assert!(seen
            .iter()
            .all(|v| params.contains(v) || self.bound.contains(v) || true));
        Some((head, params))
    }

    fn register_head_pattern(&mut self, start: usize, iff_at: usize) -> Result<(), ParseError> {
        let toks = &self.toks[start..iff_at];
        let fail_at = |p: &mut Parser, at: usize| {
            p.i = at;
            p.note("definition head");
            p.error()
        };
        if toks.len() < 2 || toks[0].kind != TokenKind::Variable {
            return Err(fail_at(self, start));
        }
        let (kind, shape_toks) = if toks[1].is_word("is") {
            if toks.len() > 2 && (toks[2].is_word("a") || toks[2].is_word("an")) {
                (PatternKind::Notion, &toks[3..])
            } else {
                (PatternKind::Adjective, &toks[2..])
            }
        } else {
            (PatternKind::Predicate, toks)
        };
        let mut shape = Vec::new();
        let mut vars = Vec::new();
        for (n, t) in shape_toks.iter().enumerate() {
            match t.kind {
                TokenKind::Word => shape.push(ShapeElem::Word(t.text.to_lowercase())),
                TokenKind::Variable if !vars.contains(&t.text) => {
                    vars.push(t.text.clone());
                    shape.push(ShapeElem::Slot);
                }
                _ => {
                    let at = start + (toks.len() - shape_toks.len()) + n;
                    return Err(fail_at(self, at));
                }
            }
        }
        if kind != PatternKind::Predicate && vars.contains(&toks[0].text) {
            return Err(fail_at(self, start));
        }
        let (vocab, _) = self
            .vocab
            .register_pattern(kind, vec![shape])
            .map_err(|error| ParseError::Vocabulary {
                pos: toks[0].pos,
                error,
            })?;
        self.vocab = vocab;
        Ok(())
    }

    fn proof(&mut self, claim: &Statement) -> Result<ProofBlock, ParseError> {
        let pos = self.pos();
        self.i += 1; // Proof
        let mut induction = None;
        if self.at_word("by") {
            self.i += 1;
            if !self.eat_word("induction") {
                return Err(self.error());
            }
            let order = if self.at_word("on") {
                self.i += 1;
                let sym = self
                    .eat_kind(TokenKind::Symbol, "relation symbol")
                    .ok_or_else(|| self.error())?;
                match self.vocab.relation(&sym.text) {
                    Some(r) if r.wellfounded => sym.text.clone(),
                    _ => return Err(ParseError::NoInductionOrder { pos: sym.pos }),
                }
            } else {
                self.vocab
                    .default_induction_order()
                    .map(str::to_string)
                    .ok_or(ParseError::NoInductionOrder { pos })?
            };
            induction = Some(order);
        }
        self.expect_period()?;
        let saved_free = self.free.len();
        if induction.is_some() {
            if let Statement::Quantified { notion, .. } = claim {
                self.free.extend(notion.var.clone());
            }
        }
        let steps = self.steps();
        self.free.truncate(saved_free);
        let steps = steps?;
        self.end_marker()?;
        Ok(ProofBlock {
            induction,
            steps,
            pos,
        })
    }

    fn end_marker(&mut self) -> Result<(), ParseError> {
        if self.at_keyword("end") {
            self.i += 1;
            self.expect_period()
        } else {
            self.note("'end'");
            Err(self.error())
        }
    }

    fn steps(&mut self) -> Result<Vec<Step>, ParseError> {
        let mut steps = Vec::new();
        loop {
            self.reset_failure();
            match self.peek() {
                Some(t) if t.is_keyword("end") => break,
                Some(t) if t.is_keyword("Case") => {
                    let pos = t.pos;
                    self.i += 1;
                    let hypothesis = self.sentence()?;
                    let inner = self.steps()?;
                    self.end_marker()?;
                    steps.push(Step::Case {
                        hypothesis,
                        steps: inner,
                        pos,
                    });
                }
                Some(t) if t.kind != TokenKind::BlockKeyword => {
                    let pos = t.pos;
                    let statement = self.sentence()?;
                    let proof = if self.at_keyword("Proof") {
                        Some(self.proof(&statement)?)
                    } else {
                        None
                    };
                    steps.push(Step::Assert {
                        statement,
                        pos,
                        proof,
                    });
                }
                _ => {
                    self.note("'end'");
                    self.note("statement");
                    return Err(self.error());
                }
            }
        }
        Ok(steps)
    }

    // ---- statements ----

    fn statement(&mut self) -> Option<Statement> {
        let lhs = self.implication()?;
        if self.at_word("iff") {
            self.i += 1;
            let rhs = self.implication()?;
            return Some(Statement::Iff(Box::new(lhs), Box::new(rhs)));
        }
        self.note("'iff'");
        Some(lhs)
    }

    fn implication(&mut self) -> Option<Statement> {
        let lhs = self.disjunction()?;
        if self.at_word("implies") {
            self.i += 1;
            let rhs = self.implication()?;
            return Some(Statement::Implies(Box::new(lhs), Box::new(rhs)));
        }
        self.note("'implies'");
        Some(lhs)
    }

    fn disjunction(&mut self) -> Option<Statement> {
        let mut acc = self.conjunction()?;
        while self.at_word("or") {
            self.i += 1;
            let rhs = self.conjunction()?;
            acc = Statement::Or(Box::new(acc), Box::new(rhs));
        }
        self.note("'or'");
        Some(acc)
    }

    fn conjunction(&mut self) -> Option<Statement> {
        let mut acc = self.unary()?;
        while self.at_word("and") || self.at_word("but") {
            self.i += 1;
            let rhs = self.unary()?;
            acc = Statement::And(Box::new(acc), Box::new(rhs));
        }
        self.note("'and'");
        Some(acc)
    }

    fn unary(&mut self) -> Option<Statement> {
        if self.at_word("not") {
            self.i += 1;
            return self.unary().map(Statement::not);
        }
        if self.at_word("if") {
            self.i += 1;
            let cond = self.statement()?;
            if !self.eat_word("then") {
                return None;
            }
            let then = self.statement()?;
            return Some(Statement::Implies(Box::new(cond), Box::new(then)));
        }
        if self.peek().is_some_and(|t| t.is_symbol("(")) {
            let start = self.i;
            self.i += 1;
            if let Some(inner) = self.statement() {
                if self.eat_symbol(")") {
                    return Some(inner);
                }
            }
            // may still be a parenthesized term starting an atom
            self.i = start;
        }
        if self.at_word("for") {
            self.i += 1;
            let Some(quantifier) = self.peek().and_then(quantifier_of) else {
                self.note("quantifier");
                return None;
            };
            self.i += 1;
            let saved = self.bound.len();
            let notion = self.bound_notion()?;
            if self.eat_kind(TokenKind::Comma, "','").is_none() {
                self.bound.truncate(saved);
                return None;
            }
            let scope = self.statement();
            self.bound.truncate(saved);
            return Some(Statement::Quantified {
                quantifier,
                notion,
                scope: Box::new(scope?),
            });
        }
        if self.at_word("there") {
            return self.existential();
        }
        self.simple()
    }

    fn existential(&mut self) -> Option<Statement> {
        self.i += 1; // there
        if !["is", "are", "exists", "exist"]
            .iter()
            .any(|w| self.at_word(w))
        {
            self.note("'is'");
            return None;
        }
        self.i += 1;
        let quantifier = match self.peek().and_then(quantifier_of) {
            Some(Quantifier::No) => {
                self.i += 1;
                Quantifier::No
            }
            Some(Quantifier::Some) => {
                self.i += 1;
                Quantifier::Some
            }
            _ => Quantifier::Some,
        };
        let saved = self.bound.len();
        let notion = self.bound_notion()?;
        let var = SurfaceTerm::Var(notion.var.clone().expect("bound notions are named"));
        let scope = if self.at_word("such") {
            self.i += 1;
            if self.eat_word("that") {
                self.statement()
            } else {
                None
            }
        } else {
            self.note("'such that'");
            self.predicate_group(&var)
        };
        self.bound.truncate(saved);
        Some(Statement::Quantified {
            quantifier,
            notion,
            scope: Box::new(scope?),
        })
    }

    fn simple(&mut self) -> Option<Statement> {
        let saved = self.bound.len();
        let result = if let Some(quantifier) = self.peek().and_then(quantifier_of) {
            self.i += 1;
            self.bound_notion().and_then(|notion| {
                let var = SurfaceTerm::Var(notion.var.clone().expect("bound notions are named"));
                self.predicate_group(&var)
                    .map(|scope| Statement::Quantified {
                        quantifier,
                        notion,
                        scope: Box::new(scope),
                    })
            })
        } else {
            self.term()
                .and_then(|subject| self.predicate_group(&subject))
        };
        self.bound.truncate(saved);
        result
    }

    /// Everything after the subject: `is a N`, `is ADJ`, a predicate
    /// pattern, or `REL object`. Quantified objects scope inside the
    /// subject, left to right.
    fn predicate_group(&mut self, subject: &SurfaceTerm) -> Option<Statement> {
        let start = self.i;
        let start_fresh = self.fresh;
        let saved = self.bound.len();
        let mut best: Option<(usize, usize, Statement)> = None;
        let mut max_fresh = self.fresh;

        let mut consider =
            |p: &mut Parser,
             result: Option<Statement>,
             best: &mut Option<(usize, usize, Statement)>| {
                if let Some(st) = result {
                    if best.as_ref().is_none_or(|(end, _, _)| p.i > *end) {
                        *best = Some((p.i, p.fresh, st));
                    }
                }
                max_fresh = max_fresh.max(p.fresh);
                p.i = start;
                p.fresh = start_fresh;
                p.bound.truncate(saved);
            };

        // `is [not] a N` / `is [not] ADJ`
        if self.at_word("is") {
            self.i += 1;
            let negated = self.at_word("not");
            if negated {
                self.i += 1;
            }
            let after_is = self.i;
            if self.at_word("a") || self.at_word("an") {
                self.i += 1;
                let r = self.notion_phrase(false).map(|notion| {
                    let st = Statement::IsNotion {
                        subject: subject.clone(),
                        notion,
                    };
                    if negated {
                        Statement::not(st)
                    } else {
                        st
                    }
                });
                consider(self, r, &mut best);
            } else {
                self.note("'a'");
            }
            let adjectives: Vec<(PatternId, Shape)> = self
                .vocab
                .patterns_of(PatternKind::Adjective)
                .flat_map(|p| p.forms.iter().map(move |f| (p.id, f.clone())))
                .collect();
            for (id, form) in adjectives {
                self.i = after_is;
                let r = self.match_form(&form, SlotMode::Object, false).map(|m| {
                    let st = Statement::HasAdjective {
                        subject: subject.clone(),
                        adjective: id,
                        args: m.args,
                    };
                    let st = wrap_lifted(st, m.lifted);
                    if negated {
                        Statement::not(st)
                    } else {
                        st
                    }
                });
                consider(self, r, &mut best);
            }
        }

        // predicate patterns: shape minus the leading subject slot
        let predicates: Vec<(PatternId, Shape)> = self
            .vocab
            .patterns_of(PatternKind::Predicate)
            .flat_map(|p| p.forms.iter().map(move |f| (p.id, f[1..].to_vec())))
            .collect();
        for (id, rest) in predicates {
            self.i = start;
            let r = self.match_form(&rest, SlotMode::Object, false).map(|m| {
                let mut args = vec![subject.clone()];
                args.extend(m.args);
                wrap_lifted(Statement::Predicate { pattern: id, args }, m.lifted)
            });
            consider(self, r, &mut best);
        }

        // symbolic relation
        self.i = start;
        match self.peek() {
            Some(t) if t.kind == TokenKind::Symbol && self.vocab.is_relation_symbol(&t.text) => {
                let symbol = t.text.clone();
                self.i += 1;
                let r = self.object().map(|(rhs, lifted)| {
                    wrap_lifted(
                        Statement::Relation {
                            symbol,
                            lhs: subject.clone(),
                            rhs,
                        },
                        lifted.into_iter().collect(),
                    )
                });
                consider(self, r, &mut best);
            }
            _ => {
                self.note("predicate");
                consider(self, None, &mut best);
            }
        }

        match best {
            Some((end, fresh, st)) => {
                self.i = end;
                self.fresh = fresh.max(max_fresh);
                Some(st)
            }
            None => {
                self.i = start;
                self.fresh = max_fresh;
                None
            }
        }
    }

    /// An argument in object position: a term or a quantified notion.
    fn object(&mut self) -> Option<(SurfaceTerm, Option<(Quantifier, NotionPhrase)>)> {
        if let Some(q) = self.peek().and_then(quantifier_of) {
            self.i += 1;
            let notion = self.bound_notion()?;
            let var = notion.var.clone().expect("bound notions are named");
            return Some((SurfaceTerm::Var(var), Some((q, notion))));
        }
        self.term().map(|t| (t, None))
    }

    /// A notion phrase introducing a bound variable (named or fresh). The
    /// variable is pushed onto the binder stack.
    fn bound_notion(&mut self) -> Option<NotionPhrase> {
        let mut np = self.notion_phrase(true)?;
        let var = match np.var.take() {
            Some(v) => v,
            None => self.fresh_var(),
        };
        self.bound.push(var.clone());
        np.var = Some(var);
        Some(np)
    }

    /// `adjective* notion` with longest-match resolution.
    fn notion_phrase(&mut self, allow_name: bool) -> Option<NotionPhrase> {
        let start = self.i;
        let start_fresh = self.fresh;
        let mut best: Option<(usize, NotionPhrase)> = None;

        let notions: Vec<(PatternId, Shape)> = self
            .vocab
            .patterns_of(PatternKind::Notion)
            .flat_map(|p| p.forms.iter().map(move |f| (p.id, f.clone())))
            .collect();
        for (id, form) in &notions {
            self.i = start;
            if let Some(m) = self.match_form(form, SlotMode::Term, allow_name) {
                if best.as_ref().is_none_or(|(end, _)| self.i > *end) {
                    best = Some((
                        self.i,
                        NotionPhrase {
                            notion: *id,
                            adjectives: vec![],
                            var: m.name,
                            args: m.args,
                        },
                    ));
                }
            }
        }
        let adjectives: Vec<(PatternId, Shape)> = self
            .vocab
            .patterns_of(PatternKind::Adjective)
            .filter(|p| p.slots() == 0)
            .flat_map(|p| p.forms.iter().map(move |f| (p.id, f.clone())))
            .collect();
        for (id, form) in &adjectives {
            self.i = start;
            if self.match_form(form, SlotMode::Term, false).is_some() && self.i > start {
                if let Some(mut rest) = self.notion_phrase(allow_name) {
                    if best.as_ref().is_none_or(|(end, _)| self.i > *end) {
                        rest.adjectives.insert(0, *id);
                        best = Some((self.i, rest));
                    }
                }
            }
        }
        self.fresh = start_fresh;
        match best {
            Some((end, np)) => {
                self.i = end;
                Some(np)
            }
            None => {
                self.i = start;
                match self.peek() {
                    Some(t) if t.kind == TokenKind::Word && quantifier_of(t).is_none() => {
                        let phrase: Vec<&str> = self.toks[start..]
                            .iter()
                            .take_while(|t| t.kind == TokenKind::Word)
                            .map(|t| t.text.as_str())
                            .collect();
                        self.note_special(Special::Unknown(phrase.join(" ")));
                    }
                    _ => self.note("noun phrase"),
                }
                None
            }
        }
    }

    /// Matches a shape at the current position. Slots are parsed as terms
    /// or objects. With `allow_name`, a variable naming the notion may
    /// follow a word that is followed by another word or ends the shape,
    /// or may follow the whole shape.
    fn match_form(
        &mut self,
        form: &[ShapeElem],
        slots: SlotMode,
        allow_name: bool,
    ) -> Option<Matched> {
        let start = self.i;
        let mut m = Matched {
            args: vec![],
            lifted: vec![],
            name: None,
        };
        for (k, elem) in form.iter().enumerate() {
            match elem {
                ShapeElem::Word(w) => {
                    if !self.at_word(w) {
                        self.note(&format!("'{w}'"));
                        self.i = start;
                        return None;
                    }
                    self.i += 1;
                    let name_ok = k + 1 == form.len() || matches!(form[k + 1], ShapeElem::Word(_));
                    if allow_name && m.name.is_none() && name_ok {
                        if let Some(t) = self.peek().filter(|t| t.kind == TokenKind::Variable) {
                            m.name = Some(t.text.clone());
                            self.i += 1;
                        }
                    }
                }
                ShapeElem::Slot => match slots {
                    SlotMode::Term => match self.term() {
                        Some(t) => m.args.push(t),
                        None => {
                            self.i = start;
                            return None;
                        }
                    },
                    SlotMode::Object => match self.object() {
                        Some((t, lifted)) => {
                            m.args.push(t);
                            m.lifted.extend(lifted);
                        }
                        None => {
                            self.i = start;
                            return None;
                        }
                    },
                },
            }
        }
        if allow_name && m.name.is_none() && matches!(form.last(), Some(ShapeElem::Slot)) {
            if let Some(t) = self.peek().filter(|t| t.kind == TokenKind::Variable) {
                m.name = Some(t.text.clone());
                self.i += 1;
            }
        }
        Some(m)
    }

    fn term(&mut self) -> Option<SurfaceTerm> {
        let Some(tok) = self.peek() else {
            self.note("term");
            return None;
        };
        if tok.is_symbol("(") {
            let start = self.i;
            self.i += 1;
            if let Some(t) = self.term() {
                if self.eat_symbol(")") {
                    return Some(t);
                }
            }
            self.i = start;
            return None;
        }
        if tok.kind == TokenKind::Variable {
            let name = tok.text.clone();
            let known = self.bound.contains(&name)
                || self.free.contains(&name)
                || self.vocab.declared_var(&name).is_some();
            if !known {
                match &mut self.lenient {
                    Some(seen) => {
                        if !seen.contains(&name) {
                            seen.push(name.clone());
                        }
                    }
                    None => {
                        self.note_special(Special::Undeclared(name));
                        return None;
                    }
                }
            }
            self.i += 1;
            return Some(SurfaceTerm::Var(name));
        }
        let start = self.i;
        let functions: Vec<(PatternId, Shape)> = self
            .vocab
            .patterns_of(PatternKind::Function)
            .flat_map(|p| p.forms.iter().map(move |f| (p.id, f.clone())))
            .collect();
        let mut best: Option<(usize, SurfaceTerm)> = None;
        for (id, form) in functions {
            self.i = start;
            if let Some(m) = self.match_form(&form, SlotMode::Term, false) {
                if best.as_ref().is_none_or(|(end, _)| self.i > *end) {
                    best = Some((self.i, SurfaceTerm::App(id, m.args)));
                }
            }
        }
        match best {
            Some((end, t)) => {
                self.i = end;
                Some(t)
            }
            None => {
                self.i = start;
                self.note("term");
                None
            }
        }
    }
}

fn claim_kind(t: &Token) -> Option<ClaimKind> {
    if t.is_keyword("Theorem") {
        Some(ClaimKind::Theorem)
    } else if t.is_keyword("Lemma") {
        Some(ClaimKind::Lemma)
    } else if t.is_keyword("Proposition") {
        Some(ClaimKind::Proposition)
    } else {
        None
    }
}

fn wrap_lifted(core: Statement, lifted: Vec<(Quantifier, NotionPhrase)>) -> Statement {
    lifted
        .into_iter()
        .rev()
        .fold(core, |scope, (quantifier, notion)| Statement::Quantified {
            quantifier,
            notion,
            scope: Box::new(scope),
        })
}

fn decl_shape(form: &[DeclElem]) -> Shape {
    form.iter()
        .map(|e| match e {
            DeclElem::Word(w) => ShapeElem::Word(w.clone()),
            DeclElem::Slot(_) => ShapeElem::Slot,
        })
        .collect()
}

fn offset_in(toks: &[Token], start: usize, t: &Token) -> usize {
    toks[start..]
        .iter()
        .position(|x| std::ptr::eq(x, t))
        .unwrap_or(0)
}
