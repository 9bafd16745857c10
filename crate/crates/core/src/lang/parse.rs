use std::fmt;

use super::lex::{tokenize, LitKind, Tok, Token};
use crate::error::{Error, Result};
use crate::subset::SubsetMask;

/// Syntax tree of a proposition or operator word.
///
/// `Sum` and `Prod` always hold at least two children when produced by the
/// parser; `Prod` order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Zero,
    One,
    Var(String),
    TildeVar(String),
    Literal(LitKind, SubsetMask),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
}

impl Expr {
    /// Whether the expression mentions a derivative or shift.
    pub fn is_operator(&self) -> bool {
        match self {
            Expr::TildeVar(_) => true,
            Expr::Literal(k, _) => k.is_operator(),
            Expr::Sum(xs) | Expr::Prod(xs) => xs.iter().any(Expr::is_operator),
            _ => false,
        }
    }

    /// Variable names in first-occurrence order (plain or tilded).
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) | Expr::TildeVar(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Sum(xs) | Expr::Prod(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            _ => {}
        }
    }

    /// Largest index mentioned by a literal, or 0.
    pub fn max_literal_index(&self) -> usize {
        match self {
            Expr::Literal(_, m) => 32 - m.bits().leading_zeros() as usize,
            Expr::Sum(xs) | Expr::Prod(xs) => xs.iter().map(Expr::max_literal_index).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn sum(mut xs: Vec<Expr>) -> Expr {
        if xs.len() == 1 {
            xs.pop().expect("one")
        } else {
            Expr::Sum(xs)
        }
    }

    fn prod(mut xs: Vec<Expr>) -> Expr {
        if xs.len() == 1 {
            xs.pop().expect("one")
        } else {
            Expr::Prod(xs)
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Expr> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            let both = Expr::Prod(vec![lhs.clone(), rhs]);
            return Ok(Expr::Sum(vec![Expr::One, lhs, both]));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr> {
        let mut acc = self.sum()?;
        while self.eat(&Tok::Or) {
            let rhs = self.sum()?;
            let both = Expr::Prod(vec![acc.clone(), rhs.clone()]);
            acc = Expr::Sum(vec![acc, rhs, both]);
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.eat(&Tok::Plus) {
            terms.push(self.term()?);
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat(&Tok::Dot) || self.eat(&Tok::And) {
                factors.push(self.unary()?);
                continue;
            }
            match self.peek() {
                Some(
                    Tok::Ident(_)
                    | Tok::Literal(..)
                    | Tok::Tilde
                    | Tok::LParen
                    | Tok::Zero
                    | Tok::One
                    | Tok::Not,
                ) => factors.push(self.unary()?),
                _ => break,
            }
        }
        Ok(Expr::prod(factors))
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Not) {
            let inner = self.unary()?;
            return Ok(Expr::Sum(vec![inner, Expr::One]));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Zero => Ok(Expr::Zero),
            Tok::One => Ok(Expr::One),
            Tok::Ident(v) => Ok(Expr::Var(v)),
            Tok::Literal(k, m) => Ok(Expr::Literal(k, m)),
            Tok::Tilde => match self.peek().cloned() {
                Some(Tok::Ident(v)) => {
                    self.pos += 1;
                    Ok(Expr::TildeVar(v))
                }
                _ => Err(self.err("expected a variable after '~'")),
            },
            Tok::LParen => {
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                Err(self.err(format!("unexpected {}", describe(&other))))
            }
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "'+'",
        Tok::Dot => "'.'",
        Tok::RParen => "')'",
        Tok::Or => "'|'",
        Tok::And => "'&'",
        Tok::Implies => "'->'",
        _ => "token",
    }
}

/// Parses an expression.
///
/// Product binds tighter than `+`; juxtaposition, `.` and `&` all denote
/// the product. The connectives `|`, `!` and `->` are expanded on the spot
/// into `a + b + ab`, `a + 1` and `1 + a + ab`.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.implication()?;
    if p.pos < p.toks.len() {
        let t = p.toks[p.pos].tok.clone();
        return Err(p.err(format!("unexpected {}", describe(&t))));
    }
    Ok(e)
}

impl fmt::Display for Expr {
    /// Inverse of [`parse`]: products print with a single space and nested
    /// sums or products are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::One => f.write_str("1"),
            Expr::Var(v) => f.write_str(v),
            Expr::TildeVar(v) => write!(f, "~{v}"),
            Expr::Literal(k, m) => write!(f, "{}{}", k.letter(), m),
            Expr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    if matches!(x, Expr::Sum(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            Expr::Prod(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    if matches!(x, Expr::Sum(_) | Expr::Prod(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
        }
    }
}
