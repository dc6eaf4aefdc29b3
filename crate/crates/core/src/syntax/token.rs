use std::fmt;

use thiserror::Error;

/// 1-based line and column (columns count characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

impl SourcePos {
    pub fn new(line: u32, col: u32) -> Self {
        SourcePos { line, col }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Variable,
    Symbol,
    Period,
    Comma,
    BlockKeyword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: SourcePos,
    /// Byte offset of the token in the source.
    pub offset: usize,
}

impl Token {
    /// Lower-cased text, used for word matching.
    pub fn word(&self) -> Option<String> {
        matches!(self.kind, TokenKind::Word | TokenKind::BlockKeyword)
            .then(|| self.text.to_lowercase())
    }

    pub fn is_word(&self, w: &str) -> bool {
        self.kind == TokenKind::Word && self.text.eq_ignore_ascii_case(w)
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.kind == TokenKind::BlockKeyword && self.text == k
    }

    pub fn is_symbol(&self, s: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{pos}: illegal character {ch:?}")]
    IllegalCharacter { pos: SourcePos, ch: char },
}

impl LexError {
    pub fn pos(&self) -> SourcePos {
        match self {
            LexError::IllegalCharacter { pos, .. } => *pos,
        }
    }
}

pub const BLOCK_KEYWORDS: &[&str] = &[
    "Signature",
    "Definition",
    "Axiom",
    "Theorem",
    "Lemma",
    "Proposition",
    "Proof",
    "Case",
    "end",
];

const SYMBOL_CHARS: &str = "=<>!+*-/|&^~:\\";

type Chars<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

fn take_while(
    chars: &mut Chars<'_>,
    pred: &dyn Fn(char) -> bool,
    text: &mut String,
    col: &mut u32,
) {
    while let Some(&(_, c)) = chars.peek() {
        if !pred(c) {
            break;
        }
        text.push(c);
        chars.next();
        *col += 1;
    }
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line. Words are runs of two or more letters (plus the article
/// `a`/`A`); a single other letter, optionally followed by digits or by `_`
/// and digits, is a variable.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    while let Some(&(offset, ch)) = chars.peek() {
        let pos = SourcePos::new(line, col);
        if ch == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if ch == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }

        let mut text = String::new();
        let kind = if ch.is_ascii_alphabetic() {
            take_while(
                &mut chars,
                &|c| c.is_ascii_alphabetic(),
                &mut text,
                &mut col,
            );
            if text.len() >= 2 || text == "a" || text == "A" {
                if BLOCK_KEYWORDS.contains(&text.as_str()) {
                    TokenKind::BlockKeyword
                } else {
                    TokenKind::Word
                }
            } else {
                // single letter: optional digits or `_digits`
                let mut lookahead = chars.clone();
                let next = lookahead.next().map(|(_, c)| c);
                let after = lookahead.next().map(|(_, c)| c);
                if next == Some('_') && after.is_some_and(|c| c.is_ascii_digit()) {
                    text.push('_');
                    chars.next();
                    col += 1;
                }
                take_while(&mut chars, &|c| c.is_ascii_digit(), &mut text, &mut col);
                TokenKind::Variable
            }
        } else if ch == '.' {
            chars.next();
            col += 1;
            text.push('.');
            TokenKind::Period
        } else if ch == ',' {
            chars.next();
            col += 1;
            text.push(',');
            TokenKind::Comma
        } else if ch == '(' || ch == ')' {
            chars.next();
            col += 1;
            text.push(ch);
            TokenKind::Symbol
        } else if SYMBOL_CHARS.contains(ch) {
            take_while(
                &mut chars,
                &|c| SYMBOL_CHARS.contains(c),
                &mut text,
                &mut col,
            );
            TokenKind::Symbol
        } else {
            return Err(LexError::IllegalCharacter { pos, ch });
        };
        tokens.push(Token {
            kind,
            text,
            pos,
            offset,
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn segments_a_sentence() {
        use TokenKind::*;
        assert_eq!(
            kinds("Every set is a class."),
            vec![
                (Word, "Every".into()),
                (Word, "set".into()),
                (Word, "is".into()),
                (Word, "a".into()),
                (Word, "class".into()),
                (Period, ".".into()),
            ]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn symbolic_relation() {
        use TokenKind::*;
        assert_eq!(
            kinds("x != y"),
            vec![
                (Variable, "x".into()),
                (Symbol, "!=".into()),
                (Variable, "y".into())
            ]
        );
    }

    #[test]
    fn variables_with_indices_and_keywords() {
        use TokenKind::*;
        assert_eq!(
            kinds("Theorem. x1 x_2 end"),
            vec![
                (BlockKeyword, "Theorem".into()),
                (Period, ".".into()),
                (Variable, "x1".into()),
                (Variable, "x_2".into()),
                (BlockKeyword, "end".into()),
            ]
        );
    }

    #[test]
    fn comments_are_skipped_but_counted() {
        let toks = tokenize("# header\nAxiom.").unwrap();
        assert_eq!(toks[0].pos, SourcePos::new(2, 1));
        assert_eq!(toks.len(), 2);
    }

    #[test]
    fn illegal_character_reports_position() {
        let err = tokenize("x is $").unwrap_err();
        assert_eq!(
            err,
            LexError::IllegalCharacter {
                pos: SourcePos::new(1, 6),
                ch: '$'
            }
        );
    }
}
