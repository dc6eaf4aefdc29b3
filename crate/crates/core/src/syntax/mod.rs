//! Surface syntax: tokens, the pattern vocabulary, the parser and the
//! canonical printer.

pub mod ast;
pub mod parser;
pub mod pretty;
pub mod token;
pub mod vocab;

pub use ast::*;
pub use parser::{parse_document, parse_statement, ParseError};
pub use token::{tokenize, LexError, SourcePos, Token, TokenKind};
pub use vocab::{Pattern, PatternId, PatternKind, Shape, ShapeElem, VocabError, Vocabulary};

/// Tokenizes and parses a complete text against an empty vocabulary.
pub fn parse_text(src: &str) -> Result<(Document, Vocabulary), ParseError> {
    let tokens = tokenize(src)?;
    parse_document(&tokens, &Vocabulary::new())
}
