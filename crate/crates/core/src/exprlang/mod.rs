//! The radical expression language.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary { "^" exponent } ;
//! exponent = [ "-" ] uint | "(" [ "-" ] uint ")" ;
//! primary  = uint
//!          | "rt" "(" expr "," uint ")"
//!          | "sqrt" "(" expr ")"
//!          | "(" expr ")" ;
//! list     = expr { "," expr } ;
//! ```
//!
//! Rationals are written as quotients (`2/3`). Whitespace is ignored.

mod lower;
mod parser;

use std::fmt;

use num_bigint::BigUint;

pub use lower::{lower, radical_candidates, LowerError, MAX_POWER_BITS, MAX_POWER_WORK};
pub use parser::{parse, parse_list, ParseError, ParseErrorKind};

/// Byte range `[start, end)` in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Literal(BigUint),
    Rt(Box<Expr>, u64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// A syntax tree node. Equality ignores spans.
#[derive(Debug, Clone, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Builds a node without a source location.
    pub fn synthetic(kind: ExprKind) -> Self {
        Expr::new(kind, Span::default())
    }

    pub fn literal(n: u64) -> Self {
        Expr::synthetic(ExprKind::Literal(BigUint::from(n)))
    }

    pub fn rt(radicand: Expr, index: u64) -> Self {
        Expr::synthetic(ExprKind::Rt(Box::new(radicand), index))
    }

    pub fn negation(e: Expr) -> Self {
        Expr::synthetic(ExprKind::Neg(Box::new(e)))
    }

    pub fn sum(a: Expr, b: Expr) -> Self {
        Expr::synthetic(ExprKind::Add(Box::new(a), Box::new(b)))
    }

    pub fn difference(a: Expr, b: Expr) -> Self {
        Expr::synthetic(ExprKind::Sub(Box::new(a), Box::new(b)))
    }

    pub fn product(a: Expr, b: Expr) -> Self {
        Expr::synthetic(ExprKind::Mul(Box::new(a), Box::new(b)))
    }

    pub fn quotient(a: Expr, b: Expr) -> Self {
        Expr::synthetic(ExprKind::Div(Box::new(a), Box::new(b)))
    }

    pub fn pow(base: Expr, k: i64) -> Self {
        Expr::synthetic(ExprKind::Pow(Box::new(base), k))
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Neg(..) => 3,
            ExprKind::Pow(..) => 4,
            ExprKind::Literal(..) | ExprKind::Rt(..) => 5,
        }
    }

    fn render(&self, min_prec: u8, out: &mut String) {
        let wrap = self.precedence() < min_prec;
        if wrap {
            out.push('(');
        }
        match &self.kind {
            ExprKind::Literal(n) => out.push_str(&n.to_string()),
            ExprKind::Rt(e, m) => {
                out.push_str("rt(");
                e.render(0, out);
                out.push_str(&format!(", {m})"));
            }
            ExprKind::Neg(e) => {
                out.push('-');
                e.render(3, out);
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                a.render(1, out);
                out.push_str(if matches!(self.kind, ExprKind::Add(..)) {
                    " + "
                } else {
                    " - "
                });
                b.render(2, out);
            }
            ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                a.render(2, out);
                out.push(if matches!(self.kind, ExprKind::Mul(..)) {
                    '*'
                } else {
                    '/'
                });
                b.render(3, out);
            }
            ExprKind::Pow(base, k) => {
                base.render(4, out);
                if *k < 0 {
                    out.push_str(&format!("^({k})"));
                } else {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

/// Canonical rendering with minimal parentheses; parses back to the same
/// tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(0, &mut out);
        f.write_str(&out)
    }
}
