use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Expr, ExprKind, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected token. `expected` lists what would have been accepted.
    Syntax {
        expected: Vec<&'static str>,
        found: String,
    },
    /// Root index of zero, or one that does not fit in 64 bits.
    Index(String),
    /// Exponent that does not fit in a signed 64-bit integer.
    Exponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
}

impl ParseError {
    /// Byte offset where the problem starts.
    pub fn offset(&self) -> usize {
        self.span.start
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error at byte {}: expected ", self.span.start)?;
                if expected.len() == 1 {
                    write!(f, "{}", expected[0])?;
                } else {
                    write!(f, "one of {}", expected.join(", "))?;
                }
                write!(f, ", found {found}")
            }
            ParseErrorKind::Index(msg) => {
                write!(f, "index error at byte {}: {msg}", self.span.start)
            }
            ParseErrorKind::Exponent(msg) => {
                write!(f, "exponent error at byte {}: {msg}", self.span.start)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Bad(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Bad(c) => write!(f, "character `{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Vec<(Tok, Span)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((
                Tok::Int(text[start..i].parse().expect("digits")),
                Span::new(start, i),
            ));
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), Span::new(start, i)));
            continue;
        } else {
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                other => Tok::Bad(other),
            }
        };
        i += c.len_utf8();
        out.push((tok, Span::new(start, i)));
    }
    out.push((Tok::Eof, Span::new(text.len(), text.len())));
    out
}

const PRIMARY_START: [&str; 4] = ["integer", "`rt`", "`sqrt`", "`(`"];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax {
                expected: expected.to_vec(),
                found: self.peek().to_string(),
            },
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.unexpected(&[name])
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.join(rhs.span);
            let kind = if add {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr::new(kind, span);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let mul = match self.peek() {
                Tok::Star => true,
                Tok::Slash => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span.join(rhs.span);
            let kind = if mul {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr::new(kind, span);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1;
            let inner = self.unary()?;
            let span = start.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let (k, end) = self.exponent()?;
            let span = base.span.join(end);
            base = Expr::new(ExprKind::Pow(Box::new(base), k), span);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<(i64, Span), ParseError> {
        let open = *self.peek() == Tok::LParen;
        if open {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let (n, span) = match self.peek().clone() {
            Tok::Int(n) => (n, self.bump().1),
            _ if negative || open => return self.unexpected(&["integer"]),
            _ => return self.unexpected(&["integer", "`-`", "`(`"]),
        };
        let k = n
            .to_i64()
            .map(|k| if negative { -k } else { k })
            .ok_or_else(|| ParseError {
                kind: ParseErrorKind::Exponent(format!("{n} does not fit in 64 bits")),
                span,
            })?;
        let end = if open {
            self.expect(Tok::RParen, "`)`")?
        } else {
            span
        };
        Ok((k, end))
    }

    fn index(&mut self) -> Result<u64, ParseError> {
        let (n, span) = match self.peek().clone() {
            Tok::Int(n) => (n, self.bump().1),
            _ => return self.unexpected(&["integer"]),
        };
        if n.is_zero() {
            return Err(ParseError {
                kind: ParseErrorKind::Index("root index must be at least 1".into()),
                span,
            });
        }
        n.to_u64().ok_or_else(|| ParseError {
            kind: ParseErrorKind::Index(format!("root index {n} does not fit in 64 bits")),
            span,
        })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let span = self.bump().1;
                Ok(Expr::new(ExprKind::Literal(n), span))
            }
            Tok::LParen => {
                let start = self.bump().1;
                let mut inner = self.expr()?;
                let end = self.expect(Tok::RParen, "`)`")?;
                inner.span = start.join(end);
                Ok(inner)
            }
            Tok::Ident(name) if name == "rt" || name == "sqrt" => {
                let start = self.bump().1;
                self.expect(Tok::LParen, "`(`")?;
                let radicand = self.expr()?;
                let m = if name == "rt" {
                    self.expect(Tok::Comma, "`,`")?;
                    self.index()?
                } else {
                    2
                };
                let end = self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::new(
                    ExprKind::Rt(Box::new(radicand), m),
                    start.join(end),
                ))
            }
            _ => self.unexpected(&PRIMARY_START),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected(&["operator", "end of input"])
        }
    }
}

/// Parses a single expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a comma-separated list of expressions.
pub fn parse_list(text: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
    };
    let mut out = vec![p.expr()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        out.push(p.expr()?);
    }
    if *p.peek() != Tok::Eof {
        return p.unexpected(&["operator", "`,`", "end of input"]);
    }
    Ok(out)
}
