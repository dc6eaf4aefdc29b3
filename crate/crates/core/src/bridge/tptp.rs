//! TPTP FOF export with symbol mangling, and a reader for the same subset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::fol::{Atom, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("symbol `{0}` cannot be encoded")]
    UnencodableSymbol(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Axiom,
    Conjecture,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Conjecture => "conjecture",
        }
    }
}

/// Bijection between original symbols and TPTP identifiers. Only symbols
/// that needed renaming are listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Mangling {
    pub to_tptp: BTreeMap<String, String>,
}

impl Mangling {
    pub fn encode<'a>(&'a self, s: &'a str) -> &'a str {
        self.to_tptp.get(s).map_or(s, String::as_str)
    }

    pub fn inverse(&self) -> BTreeMap<String, String> {
        self.to_tptp
            .iter()
            .map(|(k, v)| (v.clone(), k.clone()))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.inverse().len() == self.to_tptp.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TptpProblem {
    pub text: String,
    pub mangling: Mangling,
}

pub fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const WHOLE: &[(&str, &str)] = &[
    ("<", "lt"),
    ("<=", "leq"),
    (">", "gt"),
    (">=", "geq"),
    ("+", "plus"),
    ("*", "times"),
    ("-", "minus"),
    ("|", "mid"),
];

fn char_name(c: char) -> String {
    match c {
        '<' => "lt".into(),
        '>' => "gt".into(),
        '=' => "eq".into(),
        '+' => "plus".into(),
        '*' => "times".into(),
        '-' => "minus".into(),
        '/' => "slash".into(),
        '|' => "bar".into(),
        '&' => "amp".into(),
        '^' => "caret".into(),
        '~' => "tilde".into(),
        ':' => "colon".into(),
        '\\' => "bslash".into(),
        '!' => "bang".into(),
        c if c.is_ascii_alphanumeric() || c == '_' => c.to_string(),
        c => format!("u{:x}", c as u32),
    }
}

fn candidate(symbol: &str) -> String {
    if let Some((_, name)) = WHOLE.iter().find(|(s, _)| *s == symbol) {
        return name.to_string();
    }
    let body: Vec<String> = symbol.chars().map(char_name).collect();
    format!("op_{}", body.join("_"))
}

/// Builds an injective mangling for `symbols`. Symbols already in the TPTP
/// lower-word alphabet are kept.
pub fn mangle(symbols: &BTreeSet<String>) -> Result<Mangling, TptpError> {
    let mut used: BTreeSet<String> = symbols
        .iter()
        .filter(|s| is_lower_word(s))
        .cloned()
        .collect();
    let mut m = Mangling::default();
    for s in symbols {
        if is_lower_word(s) {
            continue;
        }
        if s.is_empty() {
            return Err(TptpError::UnencodableSymbol(s.clone()));
        }
        let base = candidate(s);
        let mut name = base.clone();
        let mut n = 1;
        while used.contains(&name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        used.insert(name.clone());
        m.to_tptp.insert(s.clone(), name);
    }
    if !m.is_injective() {
        return Err(TptpError::UnencodableSymbol(
            m.to_tptp.keys().next().cloned().unwrap_or_default(),
        ));
    }
    Ok(m)
}

struct Writer<'a> {
    mangling: &'a Mangling,
    vars: BTreeMap<String, String>,
    taken: BTreeSet<String>,
}

fn upper(v: &str) -> String {
    let mut chars = v.chars();
    let head: String = chars
        .next()
        .map(|c| c.to_ascii_uppercase())
        .into_iter()
        .collect();
    let tail: String = chars
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let name = format!("{head}{tail}");
    if name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
        name
    } else {
        format!("V{name}")
    }
}

impl Writer<'_> {
    fn bind(&mut self, v: &str) -> (Option<String>, String) {
        let base = upper(v);
        let mut name = base.clone();
        let mut n = 1;
        while self.taken.contains(&name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        self.taken.insert(name.clone());
        (self.vars.insert(v.to_string(), name.clone()), name)
    }

    fn unbind(&mut self, v: &str, prev: Option<String>, name: &str) {
        self.taken.remove(name);
        match prev {
            Some(p) => self.vars.insert(v.to_string(), p),
            None => self.vars.remove(v),
        };
    }

    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(self.vars.get(v).map_or(v.as_str(), String::as_str)),
            Term::App(f, args) => {
                out.push_str(self.mangling.encode(f));
                self.args(args, out);
            }
        }
    }

    fn args(&self, args: &[Term], out: &mut String) {
        if args.is_empty() {
            return;
        }
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.term(a, out);
        }
        out.push(')');
    }

    fn atom(&self, a: &Atom, out: &mut String) {
        if a.is_equality() {
            self.term(&a.args[0], out);
            out.push_str(" = ");
            self.term(&a.args[1], out);
        } else {
            out.push_str(self.mangling.encode(&a.pred));
            self.args(&a.args, out);
        }
    }

    fn formula(&mut self, f: &Formula, out: &mut String) {
        match f {
            Formula::True => out.push_str("$true"),
            Formula::False => out.push_str("$false"),
            Formula::Atom(a) => self.atom(a, out),
            Formula::Eq(s, t) => {
                self.term(s, out);
                out.push_str(" = ");
                self.term(t, out);
            }
            Formula::Not(a) => match a.as_ref() {
                Formula::Eq(s, t) => {
                    self.term(s, out);
                    out.push_str(" != ");
                    self.term(t, out);
                }
                _ => {
                    out.push('~');
                    self.unit(a, out);
                }
            },
            Formula::And(a, b) => self.binary(a, "&", b, out),
            Formula::Or(a, b) => self.binary(a, "|", b, out),
            Formula::Implies(a, b) => self.binary(a, "=>", b, out),
            Formula::Iff(a, b) => self.binary(a, "<=>", b, out),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(f, Formula::Forall(..)) {
                    '!'
                } else {
                    '?'
                };
                let (prev, name) = self.bind(v);
                let _ = write!(out, "{q}[{name}]: ");
                self.unit(body, out);
                self.unbind(v, prev, &name);
            }
        }
    }

    /// A formula in a position that needs a unitary formula.
    fn unit(&mut self, f: &Formula, out: &mut String) {
        let needs_parens = matches!(
            f,
            Formula::And(..)
                | Formula::Or(..)
                | Formula::Implies(..)
                | Formula::Iff(..)
                | Formula::Eq(..)
        ) || matches!(f, Formula::Atom(a) if a.is_equality())
            || matches!(f, Formula::Not(a) if matches!(a.as_ref(), Formula::Eq(..)));
        if needs_parens {
            out.push('(');
            self.formula(f, out);
            out.push(')');
        } else {
            self.formula(f, out);
        }
    }

    fn binary(&mut self, a: &Formula, op: &str, b: &Formula, out: &mut String) {
        self.unit(a, out);
        let _ = write!(out, " {op} ");
        self.unit(b, out);
    }
}

/// TPTP rendering of one formula. Free variables are universally closed.
pub fn formula_to_tptp(f: &Formula, mangling: &Mangling) -> String {
    let closed = f.universal_closure();
    let mut w = Writer {
        mangling,
        vars: BTreeMap::new(),
        taken: BTreeSet::new(),
    };
    let mut out = String::new();
    w.formula(&closed, &mut out);
    out
}

fn sanitize_name(label: &str) -> String {
    let body: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if is_lower_word(&body) {
        body
    } else {
        format!("f_{body}")
    }
}

/// Writes a problem: one axiom per premise and one conjecture.
pub fn write_problem(
    premises: &[(String, Formula)],
    goal: &Formula,
) -> Result<TptpProblem, TptpError> {
    let mut symbols = goal.symbols();
    for (_, f) in premises {
        symbols.extend(f.symbols());
    }
    let mangling = mangle(&symbols)?;
    let mut text = String::new();
    for (from, to) in &mangling.to_tptp {
        let _ = writeln!(text, "% mangled: {to} = {from}");
    }
    let mut names = BTreeSet::from(["goal".to_string()]);
    for (label, f) in premises {
        let base = sanitize_name(label);
        let mut name = base.clone();
        let mut n = 1;
        while !names.insert(name.clone()) {
            name = format!("{base}_{n}");
            n += 1;
        }
        let _ = writeln!(
            text,
            "fof({name}, {}, {}).",
            Role::Axiom.as_str(),
            formula_to_tptp(f, &mangling)
        );
    }
    let _ = writeln!(
        text,
        "fof(goal, {}, {}).",
        Role::Conjecture.as_str(),
        formula_to_tptp(goal, &mangling)
    );
    Ok(TptpProblem { text, mangling })
}

// ---- reader ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotated {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Punct(&'static str),
}

const PUNCT: &[&str] = &[
    "<=>", "=>", "!=", "(", ")", "[", "]", ",", ".", ":", "~", "&", "|", "!", "?", "=",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, TptpError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = match line.find('%') {
            Some(k) => &line[..k],
            None => line,
        };
        let mut rest = line;
        while let Some(c) = rest.chars().next() {
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            if c.is_ascii_alphabetic() || c == '$' {
                let end = rest[1..]
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .map_or(rest.len(), |k| k + 1);
                let word = &rest[..end];
                let tok = if c.is_ascii_uppercase() {
                    Tok::Var(word.into())
                } else {
                    Tok::Ident(word.into())
                };
                out.push((tok, line_no));
                rest = &rest[end..];
                continue;
            }
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    out.push((Tok::Punct(p), line_no));
                    rest = &rest[p.len()..];
                }
                None => {
                    return Err(TptpError::Syntax {
                        line: line_no,
                        message: format!("unexpected `{c}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<(Tok, usize)>,
    i: usize,
    inverse: BTreeMap<String, String>,
}

impl Reader {
    fn line(&self) -> usize {
        self.toks
            .get(self.i)
            .or(self.toks.last())
            .map_or(0, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TptpError> {
        Err(TptpError::Syntax {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn at(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), TptpError> {
        if self.at(p) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn ident(&mut self) -> Result<String, TptpError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn symbol(&self, s: String) -> String {
        self.inverse.get(&s).cloned().unwrap_or(s)
    }

    fn annotated(&mut self) -> Result<Annotated, TptpError> {
        if self.ident()? != "fof" {
            return self.err("expected `fof`");
        }
        self.expect("(")?;
        let name = self.ident()?;
        self.expect(",")?;
        let role = match self.ident()?.as_str() {
            "axiom" | "hypothesis" | "definition" | "lemma" | "theorem" => Role::Axiom,
            "conjecture" => Role::Conjecture,
            other => return self.err(format!("unsupported role `{other}`")),
        };
        self.expect(",")?;
        let formula = self.formula()?;
        self.expect(")")?;
        self.expect(".")?;
        Ok(Annotated {
            name,
            role,
            formula,
        })
    }

    fn formula(&mut self) -> Result<Formula, TptpError> {
        let first = self.unit()?;
        if self.at("&") || self.at("|") {
            let op = if self.at("&") { "&" } else { "|" };
            let mut parts = vec![first];
            while self.at(op) {
                self.i += 1;
                parts.push(self.unit()?);
            }
            return Ok(if op == "&" {
                Formula::conjunction(parts)
            } else {
                Formula::disjunction(parts)
            });
        }
        if self.at("=>") {
            self.i += 1;
            return Ok(Formula::implies(first, self.unit()?));
        }
        if self.at("<=>") {
            self.i += 1;
            return Ok(Formula::iff(first, self.unit()?));
        }
        Ok(first)
    }

    fn unit(&mut self) -> Result<Formula, TptpError> {
        if self.at("~") {
            self.i += 1;
            return Ok(Formula::not(self.unit()?));
        }
        if self.at("(") {
            self.i += 1;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.at("!") || self.at("?") {
            let universal = self.at("!");
            self.i += 1;
            self.expect("[")?;
            let mut vars = Vec::new();
            loop {
                match self.peek() {
                    Some(Tok::Var(v)) => {
                        vars.push(v.clone());
                        self.i += 1;
                    }
                    _ => return self.err("expected variable"),
                }
                if self.at(",") {
                    self.i += 1;
                } else {
                    break;
                }
            }
            self.expect("]")?;
            self.expect(":")?;
            let body = self.unit()?;
            return Ok(vars.into_iter().rev().fold(body, |acc, v| {
                if universal {
                    Formula::forall(v, acc)
                } else {
                    Formula::exists(v, acc)
                }
            }));
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "$true" || s == "$false" {
                let t = s == "$true";
                self.i += 1;
                return Ok(if t { Formula::True } else { Formula::False });
            }
        }
        // atom or equation
        let lhs = self.term()?;
        if self.at("=") || self.at("!=") {
            let negated = self.at("!=");
            self.i += 1;
            let rhs = self.term()?;
            let eq = Formula::Eq(lhs, rhs);
            return Ok(if negated { Formula::not(eq) } else { eq });
        }
        match lhs {
            Term::App(p, args) => Ok(Formula::Atom(Atom::new(p, args))),
            Term::Var(v) => self.err(format!("variable `{v}` used as a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.i += 1;
                Ok(Term::var(v))
            }
            Some(Tok::Ident(f)) => {
                self.i += 1;
                let mut args = Vec::new();
                if self.at("(") {
                    self.i += 1;
                    loop {
                        args.push(self.term()?);
                        if self.at(",") {
                            self.i += 1;
                        } else {
                            break;
                        }
                    }
                    self.expect(")")?;
                }
                Ok(Term::app(self.symbol(f), args))
            }
            _ => self.err("expected term"),
        }
    }
}

/// Reads `fof` lines. Symbols listed in `mangling` are mapped back to their
/// original names.
pub fn read_problem(text: &str, mangling: &Mangling) -> Result<Vec<Annotated>, TptpError> {
    let mut r = Reader {
        toks: lex(text)?,
        i: 0,
        inverse: mangling.inverse(),
    };
    let mut out = Vec::new();
    while r.i < r.toks.len() {
        out.push(r.annotated()?);
    }
    Ok(out)
}

/// Reads a problem written without mangling (e.g. a test fixture).
pub fn read(text: &str) -> Result<Vec<Annotated>, TptpError> {
    read_problem(text, &Mangling::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, v: &str) -> Formula {
        Formula::atom(p, vec![Term::var(v)])
    }

    #[test]
    fn conjecture_syntax() {
        let goal = Formula::forall(
            "x",
            Formula::implies(atom("aSet", "x"), atom("aClass", "x")),
        );
        let p = write_problem(&[], &goal).unwrap();
        assert_eq!(
            p.text,
            "fof(goal, conjecture, ![X]: (aSet(X) => aClass(X))).\n"
        );
    }

    #[test]
    fn axiom_syntax() {
        let p = write_problem(
            &[("ax1".into(), Formula::atom("p", vec![Term::constant("a")]))],
            &Formula::True,
        )
        .unwrap();
        assert!(p.text.starts_with("fof(ax1, axiom, p(a)).\n"));
    }

    #[test]
    fn symbols_are_mangled_injectively() {
        let f = Formula::atom(
            "<",
            vec![
                Term::constant("a"),
                Term::app("+", vec![Term::constant("a")]),
            ],
        );
        let g = Formula::atom("lt", vec![Term::constant("a"), Term::constant("a")]);
        let p = write_problem(&[("h".into(), g)], &f).unwrap();
        assert!(p.mangling.is_injective());
        assert_eq!(p.mangling.to_tptp["<"], "lt_1");
        assert_eq!(p.mangling.to_tptp["+"], "plus");
        let back = read_problem(&p.text, &p.mangling).unwrap();
        assert!(back[1].formula.alpha_eq(&f));
    }
}
