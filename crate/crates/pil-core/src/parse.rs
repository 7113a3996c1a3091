//! Text grammar for formulas:
//!
//! ```text
//! formula := "one" | "out" var var | "in" var var
//!          | "(" formula op formula ")"      op ∈ par ten seq plus with
//!          | quant var "." formula           quant ∈ all ex new ya
//! ```
//!
//! Identifiers match `[a-zA-Z][a-zA-Z0-9_]*`; keywords are reserved. A file
//! may also hold a comma-separated sequent.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Connective, Formula, Quantifier, Sequent, Variable};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "one", "out", "in", "par", "ten", "seq", "plus", "with", "all", "ex", "new", "ya",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.bump(c);
                continue;
            }
            let (line, col) = (self.line, self.col);
            match c {
                '(' => {
                    self.bump(c);
                    out.push((Tok::LParen, line, col));
                }
                ')' => {
                    self.bump(c);
                    out.push((Tok::RParen, line, col));
                }
                '.' => {
                    self.bump(c);
                    out.push((Tok::Dot, line, col));
                }
                ',' => {
                    self.bump(c);
                    out.push((Tok::Comma, line, col));
                }
                c if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while let Some(c) = self.src[self.pos..].chars().next() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            self.bump(c);
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Ident(self.src[start..self.pos].to_string()), line, col));
                }
                other => return Err(self.error(format!("unexpected character `{other}`"))),
            }
        }
        out.push((Tok::Eof, self.line, self.col));
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.tokens[self.at];
        (l, c)
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn variable(&mut self) -> Result<Variable, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(Variable::new(s))
            }
            Tok::Ident(s) => Err(self.error_here(format!("keyword `{s}` cannot name a variable"))),
            other => Err(self.error_here(format!("expected a variable, found {other}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(kw) => match kw.as_str() {
                "one" => {
                    self.next();
                    Ok(Formula::one())
                }
                "out" | "in" => {
                    self.next();
                    let x = self.variable()?;
                    let y = self.variable()?;
                    Ok(if kw == "out" {
                        Formula::send(x, y)
                    } else {
                        Formula::recv(x, y)
                    })
                }
                "all" | "ex" | "new" | "ya" => {
                    self.next();
                    let x = self.variable()?;
                    self.expect(&Tok::Dot)?;
                    let body = self.formula()?;
                    let q = match kw.as_str() {
                        "all" => Quantifier::Forall,
                        "ex" => Quantifier::Exists,
                        "new" => Quantifier::New,
                        _ => Quantifier::Ya,
                    };
                    Ok(Formula::Quant(q, x, Box::new(body)))
                }
                other => Err(self.error_here(format!(
                    "expected a formula, found identifier `{other}` (binary connectives need parentheses)"
                ))),
            },
            Tok::LParen => {
                self.next();
                let a = self.formula()?;
                let op = match self.peek().clone() {
                    Tok::Ident(op) => match op.as_str() {
                        "par" => Connective::Par,
                        "ten" => Connective::Tensor,
                        "seq" => Connective::Prec,
                        "plus" => Connective::Plus,
                        "with" => Connective::With,
                        other => {
                            return Err(
                                self.error_here(format!("expected a connective, found `{other}`"))
                            )
                        }
                    },
                    other => {
                        return Err(self.error_here(format!("expected a connective, found {other}")))
                    }
                };
                self.next();
                let b = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(Formula::Bin(op, Box::new(a), Box::new(b)))
            }
            other => Err(self.error_here(format!("expected a formula, found {other}"))),
        }
    }
}

/// Parse a single formula.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        tokens: Lexer::new(src).tokens()?,
        at: 0,
    };
    let f = p.formula()?;
    match p.peek() {
        Tok::Eof => Ok(f),
        other => Err(p.error_here(format!("trailing input: {other}"))),
    }
}

/// Parse a comma-separated sequent (at least one formula).
pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser {
        tokens: Lexer::new(src).tokens()?,
        at: 0,
    };
    let mut formulas = vec![p.formula()?];
    while p.peek() == &Tok::Comma {
        p.next();
        formulas.push(p.formula()?);
    }
    match p.peek() {
        Tok::Eof => Ok(Sequent::new(formulas)),
        other => Err(p.error_here(format!("trailing input: {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrips_display() {
        let cases = [
            "one",
            "out x y",
            "in x y",
            "(out x y par in x y)",
            "((one ten one) seq (one plus one))",
            "all x. ex y. (out x y with one)",
            "new a. ya b. (out a b seq one)",
        ];
        for src in cases {
            let f = parse_formula(src).unwrap();
            assert_eq!(f.to_string(), src);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_formula("(one par\n  bogus!)").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 8);
        let err = parse_formula("out x").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
    }

    #[test]
    fn rejects_keyword_variables() {
        assert!(parse_formula("out par y").is_err());
        assert!(parse_formula("all one. one").is_err());
    }

    #[test]
    fn parses_sequents() {
        let s = parse_sequent("one, out x y, (one par one)").unwrap();
        assert_eq!(s.len(), 3);
        assert!(parse_sequent("one,").is_err());
    }

    #[test]
    fn infix_requires_parens() {
        assert!(parse_formula("one par one").is_err());
    }
}
