//! The dynamic pattern vocabulary. Signature and definition blocks extend
//! it; parsing threads it through as an immutable value.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::NotionPhrase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Notion,
    Adjective,
    Predicate,
    Function,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::Notion => "notion",
            PatternKind::Adjective => "adjective",
            PatternKind::Predicate => "predicate",
            PatternKind::Function => "function",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeElem {
    Word(String),
    Slot,
}

pub type Shape = Vec<ShapeElem>;

pub fn shape_to_string(shape: &[ShapeElem]) -> String {
    shape
        .iter()
        .map(|e| match e {
            ShapeElem::Word(w) => w.as_str(),
            ShapeElem::Slot => "?",
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A registered pattern. For notions and adjectives the shape omits the
/// subject, which is an implicit extra argument; predicate shapes start
/// with the subject slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub id: PatternId,
    pub kind: PatternKind,
    /// Alternative surface forms; the first is canonical.
    pub forms: Vec<Shape>,
    /// Number of arguments of the first-order symbol.
    pub arity: usize,
    /// First-order symbol name, e.g. `aSubgroupOf`.
    pub symbol: String,
}

impl Pattern {
    pub fn slots(&self) -> usize {
        self.forms[0]
            .iter()
            .filter(|e| **e == ShapeElem::Slot)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInfo {
    pub symbol: String,
    pub transitive: bool,
    pub wellfounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("duplicate {kind} pattern `{shape}`")]
    DuplicatePattern { kind: PatternKind, shape: String },
    #[error("{kind} pattern `{shape}` is ambiguous with `{existing}`")]
    AmbiguousPattern {
        kind: PatternKind,
        shape: String,
        existing: String,
    },
    #[error("symbol `{symbol}` of `{shape}` is already used")]
    NameCollision { symbol: String, shape: String },
    #[error("invalid shape `{shape}`: {reason}")]
    InvalidShape { shape: String, reason: &'static str },
    #[error("relation `{0}` is already declared")]
    DuplicateRelation(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    patterns: Vec<Pattern>,
    relations: BTreeMap<String, RelationInfo>,
    declared_vars: BTreeMap<String, NotionPhrase>,
}

pub const BUILTIN_RELATIONS: &[&str] = &["=", "!="];

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn pattern(&self, id: PatternId) -> &Pattern {
        &self.patterns[id.0]
    }

    pub fn patterns_of(&self, kind: PatternKind) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter().filter(move |p| p.kind == kind)
    }

    pub fn relation(&self, symbol: &str) -> Option<&RelationInfo> {
        self.relations.get(symbol)
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelationInfo> {
        self.relations.values()
    }

    pub fn is_relation_symbol(&self, symbol: &str) -> bool {
        BUILTIN_RELATIONS.contains(&symbol) || self.relations.contains_key(symbol)
    }

    pub fn declared_var(&self, name: &str) -> Option<&NotionPhrase> {
        self.declared_vars.get(name)
    }

    /// Registers a new pattern with all its surface forms.
    pub fn register_pattern(
        &self,
        kind: PatternKind,
        forms: Vec<Shape>,
    ) -> Result<(Vocabulary, PatternId), VocabError> {
        validate(kind, &forms)?;
        for form in &forms {
            for existing in self.patterns_of(kind) {
                for other in &existing.forms {
                    if other == form {
                        return Err(VocabError::DuplicatePattern {
                            kind,
                            shape: shape_to_string(form),
                        });
                    }
                    if words_of(other) == words_of(form) {
                        return Err(VocabError::AmbiguousPattern {
                            kind,
                            shape: shape_to_string(form),
                            existing: shape_to_string(other),
                        });
                    }
                }
            }
        }
        let symbol = symbol_name(kind, &forms[0]);
        if self.patterns.iter().any(|p| p.symbol == symbol) {
            return Err(VocabError::NameCollision {
                symbol,
                shape: shape_to_string(&forms[0]),
            });
        }
        let slots = forms[0].iter().filter(|e| **e == ShapeElem::Slot).count();
        let arity = match kind {
            PatternKind::Notion | PatternKind::Adjective => slots + 1,
            PatternKind::Predicate | PatternKind::Function => slots,
        };
        let id = PatternId(self.patterns.len());
        let mut next = self.clone();
        next.patterns.push(Pattern {
            id,
            kind,
            forms,
            arity,
            symbol,
        });
        Ok((next, id))
    }

    pub fn register_relation(
        &self,
        symbol: &str,
        transitive: bool,
        wellfounded: bool,
    ) -> Result<Vocabulary, VocabError> {
        if self.is_relation_symbol(symbol) {
            return Err(VocabError::DuplicateRelation(symbol.to_string()));
        }
        let mut next = self.clone();
        next.relations.insert(
            symbol.to_string(),
            RelationInfo {
                symbol: symbol.to_string(),
                transitive,
                wellfounded,
            },
        );
        Ok(next)
    }

    /// Declares variables as ranging over a notion phrase. A later
    /// declaration of the same name replaces the earlier one.
    pub fn declare_vars(&self, vars: &[String], notion: &NotionPhrase) -> Vocabulary {
        let mut next = self.clone();
        for v in vars {
            next.declared_vars.insert(v.clone(), notion.clone());
        }
        next
    }

    /// The first declared well-founded relation.
    pub fn default_induction_order(&self) -> Option<&str> {
        self.relations
            .values()
            .find(|r| r.wellfounded)
            .map(|r| r.symbol.as_str())
    }
}

fn words_of(shape: &[ShapeElem]) -> Vec<&str> {
    shape
        .iter()
        .filter_map(|e| match e {
            ShapeElem::Word(w) => Some(w.as_str()),
            ShapeElem::Slot => None,
        })
        .collect()
}

fn validate(kind: PatternKind, forms: &[Shape]) -> Result<(), VocabError> {
    let err = |shape: &Shape, reason| VocabError::InvalidShape {
        shape: shape_to_string(shape),
        reason,
    };
    let Some(first) = forms.first() else {
        return Err(VocabError::InvalidShape {
            shape: String::new(),
            reason: "no forms",
        });
    };
    let slots = |s: &Shape| s.iter().filter(|e| **e == ShapeElem::Slot).count();
    for form in forms {
        if form.is_empty() || words_of(form).is_empty() {
            return Err(err(form, "a pattern needs at least one word"));
        }
        if slots(form) != slots(first) {
            return Err(err(form, "forms disagree on the number of slots"));
        }
        if form
            .windows(2)
            .any(|w| w[0] == ShapeElem::Slot && w[1] == ShapeElem::Slot)
        {
            return Err(err(form, "adjacent slots"));
        }
        let starts_with_slot = form[0] == ShapeElem::Slot;
        match kind {
            PatternKind::Predicate if !starts_with_slot => {
                return Err(err(form, "a predicate starts with its subject"))
            }
            PatternKind::Notion | PatternKind::Adjective | PatternKind::Function
                if starts_with_slot =>
            {
                return Err(err(form, "this pattern must start with a word"))
            }
            _ => {}
        }
    }
    Ok(())
}

fn camel(words: &[&str]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        let mut chars = w.chars();
        if let Some(c) = chars.next() {
            if i == 0 {
                out.extend(c.to_lowercase());
            } else {
                out.extend(c.to_uppercase());
            }
            out.push_str(chars.as_str());
        }
    }
    out
}

fn capitalized(words: &[&str]) -> String {
    let c = camel(words);
    let mut chars = c.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => c,
    }
}

/// First-order symbol for a pattern: `aSubgroupOf`, `isPrime`, `divides`,
/// `successorOf`.
pub fn symbol_name(kind: PatternKind, shape: &[ShapeElem]) -> String {
    let words = words_of(shape);
    match kind {
        PatternKind::Notion => format!("a{}", capitalized(&words)),
        PatternKind::Adjective => format!("is{}", capitalized(&words)),
        PatternKind::Predicate => camel(&words),
        PatternKind::Function => {
            let rest = if words.len() > 1 && words[0] == "the" {
                &words[1..]
            } else {
                &words[..]
            };
            camel(rest)
        }
    }
}
