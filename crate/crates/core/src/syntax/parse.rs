//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := until ('&' until)*
//! until   := unary (('U' | 'Ua') until)?
//! unary   := ('!' | 'X' | 'N' | 'F' | 'G' | 'Xa' | 'Na' | 'Fa' | 'Ga') unary | atom
//! atom    := 'true' | 'false' | ident | '(' formula ')'
//! ```
//!
//! Abbreviations are expanded while parsing, so the result is always a core
//! tree.

use thiserror::Error;

use super::formula::{Formula, Logic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {pos}")]
    Lexical { pos: usize, found: char },
    #[error("syntax error at offset {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("abstract operator `{op}` at offset {pos} is not allowed in ltl mode")]
    AbstractInLtl { pos: usize, op: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meta(char),
    True,
    False,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Unary(UnaryOp),
    Until,
    AbsUntil,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnaryOp {
    Next,
    StrongNext,
    Eventually,
    Always,
    AbsNext,
    AbsStrongNext,
    AbsEventually,
    AbsAlways,
}

impl UnaryOp {
    fn keyword(self) -> &'static str {
        match self {
            UnaryOp::Next => "X",
            UnaryOp::StrongNext => "N",
            UnaryOp::Eventually => "F",
            UnaryOp::Always => "G",
            UnaryOp::AbsNext => "Xa",
            UnaryOp::AbsStrongNext => "Na",
            UnaryOp::AbsEventually => "Fa",
            UnaryOp::AbsAlways => "Ga",
        }
    }

    fn is_abstract(self) -> bool {
        matches!(
            self,
            UnaryOp::AbsNext | UnaryOp::AbsStrongNext | UnaryOp::AbsEventually | UnaryOp::AbsAlways
        )
    }

    fn apply(self, f: Formula) -> Formula {
        match self {
            UnaryOp::Next => Formula::next(f),
            UnaryOp::StrongNext => Formula::strong_next(f),
            UnaryOp::Eventually => Formula::eventually(f),
            UnaryOp::Always => Formula::always(f),
            UnaryOp::AbsNext => Formula::abs_next(f),
            UnaryOp::AbsStrongNext => Formula::abs_strong_next(f),
            UnaryOp::AbsEventually => Formula::abs_eventually(f),
            UnaryOp::AbsAlways => Formula::abs_always(f),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Meta(c) => format!("metavariable `{c}`"),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::Not => "`!`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Unary(op) => format!("`{}`", op.keyword()),
        Tok::Until => "`U`".into(),
        Tok::AbsUntil => "`Ua`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Metavariables accepted in axiom templates. They cannot collide with
/// user propositions because identifiers are ASCII.
pub(crate) const METAVARIABLES: [char; 2] = ['φ', 'ψ'];

fn lex(text: &str, allow_meta: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((pos, tok));
            continue;
        }
        if c == '-' || c == '<' {
            let expected = if c == '-' { "->" } else { "<->" };
            let rest = &text[pos..];
            if rest.starts_with(expected) {
                for _ in 0..expected.len() {
                    chars.next();
                }
                out.push((pos, if c == '-' { Tok::Imp } else { Tok::Iff }));
                continue;
            }
            return Err(ParseError::Lexical { pos, found: c });
        }
        if allow_meta && METAVARIABLES.contains(&c) {
            chars.next();
            out.push((pos, Tok::Meta(c)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[pos..end];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                "U" => Tok::Until,
                "Ua" => Tok::AbsUntil,
                "X" => Tok::Unary(UnaryOp::Next),
                "N" => Tok::Unary(UnaryOp::StrongNext),
                "F" => Tok::Unary(UnaryOp::Eventually),
                "G" => Tok::Unary(UnaryOp::Always),
                "Xa" => Tok::Unary(UnaryOp::AbsNext),
                "Na" => Tok::Unary(UnaryOp::AbsStrongNext),
                "Fa" => Tok::Unary(UnaryOp::AbsEventually),
                "Ga" => Tok::Unary(UnaryOp::AbsAlways),
                _ => {
                    // identifiers are lowercase; anything else is a lexical error
                    if let Some(bad) = word.chars().find(|d| d.is_ascii_uppercase()) {
                        let offset = word.find(bad).unwrap_or(0);
                        return Err(ParseError::Lexical {
                            pos: pos + offset,
                            found: bad,
                        });
                    }
                    Tok::Ident(word.to_string())
                }
            };
            out.push((pos, tok));
            continue;
        }
        return Err(ParseError::Lexical { pos, found: c });
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    logic: Logic,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            expected,
            found: describe(self.peek()),
        }
    }

    fn check_abstract(&self, op: &'static str) -> Result<(), ParseError> {
        if self.logic == Logic::Ltl {
            Err(ParseError::AbstractInLtl { pos: self.pos(), op })
        } else {
            Ok(())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == &Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == &Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == &Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.until()?;
        while self.peek() == &Tok::And {
            self.bump();
            let rhs = self.until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                let rhs = self.until()?;
                Ok(Formula::until(lhs, rhs))
            }
            Tok::AbsUntil => {
                self.check_abstract("Ua")?;
                self.bump();
                let rhs = self.until()?;
                Ok(Formula::abs_until(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Unary(op) => {
                if op.is_abstract() {
                    self.check_abstract(op.keyword())?;
                }
                self.bump();
                Ok(op.apply(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::ff())
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Prop(name))
            }
            Tok::Meta(c) => {
                self.bump();
                Ok(Formula::Prop(c.to_string()))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

fn parse_with(text: &str, logic: Logic, allow_meta: bool) -> Result<Formula, ParseError> {
    let toks = lex(text, allow_meta)?;
    let mut parser = Parser { toks, at: 0, logic };
    let f = parser.formula()?;
    if parser.peek() != &Tok::Eof {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

/// Parses `text` into a desugared core formula.
///
/// In [`Logic::Ltl`] mode the abstract operators are rejected.
pub fn parse_formula(text: &str, logic: Logic) -> Result<Formula, ParseError> {
    parse_with(text, logic, false)
}

/// Parses an axiom template; `φ` and `ψ` become placeholder propositions.
pub(crate) fn parse_template(text: &str) -> Formula {
    parse_with(text, Logic::Caret, true)
        .unwrap_or_else(|e| panic!("built-in template {text:?} does not parse: {e}"))
}
