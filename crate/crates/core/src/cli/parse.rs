//! Expression language for scalars in `ℚ(t)` and operators `λ·id + Σ c_k·D^k`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint)?
//! atom   := uint | VAR | 'id' | 'D' ('^' uint)? | '(' expr ')'
//! ```
//!
//! `VAR` is `t` by default (`x` for polynomial black boxes). Whitespace is
//! ignored. Rationals are written as quotients, `3/2`.
//!
//! Elaboration types every node as a scalar or an operator:
//!
//! * `s ± s`, `s * s`, `s / s`, `s ^ k` are field operations;
//! * `op ± op` adds operators, `s * op` multiplies coefficients on the left,
//!   `op / s` divides them;
//! * `op * op` and `op * s` compose (`D * t` is `id + t*D`), `op ^ k` is the
//!   `k`-fold composition;
//! * `s ± op` and `s / op` are rejected.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactfield::{Poly, RatFunc, Rational};
use crate::operators::OperatorFunc;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var,
    Id,
    D,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Var => f.write_str("variable"),
            Tok::Id => f.write_str("'id'"),
            Tok::D => f.write_str("'D'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, var: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tok_line, tok_column) = (line, column);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: tok_line,
                column: tok_column,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            push(&mut out, Tok::Int(digits.parse().expect("ascii digits")));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            let tok = match word.as_str() {
                "id" => Tok::Id,
                "D" => Tok::D,
                w if w == var => Tok::Var,
                w => {
                    return Err(syntax(
                        tok_line,
                        tok_column,
                        format!("unknown identifier '{w}'"),
                    ))
                }
            };
            push(&mut out, tok);
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(syntax(line, column, format!("unexpected character '{c}'"))),
        };
        push(&mut out, tok);
        i += 1;
        column += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Abstract syntax of the expression language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var,
    Id,
    /// `D^k`, `k ≥ 1` (plain `D` is `k = 1`; `D^0` is `id`).
    D(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        let t = self.peek();
        Err(syntax(
            t.line,
            t.column,
            format!("expected {expected}, found {}", t.tok),
        ))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let k = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                let k =
                    u32::try_from(n).map_err(|_| syntax(t.line, t.column, "exponent too large"))?;
                self.bump();
                Ok(k)
            }
            _ => self.unexpected("a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Var => {
                self.bump();
                Ok(Expr::Var)
            }
            Tok::Id => {
                self.bump();
                Ok(Expr::Id)
            }
            Tok::D => {
                self.bump();
                if self.peek().tok == Tok::Caret {
                    self.bump();
                    let k = self.exponent()?;
                    return Ok(if k == 0 { Expr::Id } else { Expr::D(k) });
                }
                Ok(Expr::D(1))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return self.unexpected("')'");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.unexpected("a number, variable, 'id', 'D' or '('"),
        }
    }
}

/// Parses in the variable `t`.
pub fn parse_expr(text: &str) -> Result<Expr> {
    parse_expr_in(text, "t")
}

pub fn parse_expr_in(text: &str, var: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text, var)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

/// A typed, elaborated expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(RatFunc),
    Operator(OperatorFunc),
}

impl Value {
    pub fn display_with(&self, var: &str) -> String {
        match self {
            Value::Scalar(s) => s.display_with(var),
            Value::Operator(op) => op.display_with(var),
        }
    }
}

fn ill_typed(what: &str) -> Error {
    Error::Elaboration(format!("ill-typed expression: {what}"))
}

impl Expr {
    pub fn elaborate(&self) -> Result<Value> {
        use Value::{Operator, Scalar};
        Ok(match self {
            Expr::Int(n) => Scalar(RatFunc::constant(Rational::from_integer(n.clone()))),
            Expr::Var => Scalar(RatFunc::t()),
            Expr::Id => Operator(OperatorFunc::identity()),
            Expr::D(k) => Operator(OperatorFunc::d_power(*k as usize)),
            Expr::Neg(e) => match e.elaborate()? {
                Scalar(s) => Scalar(-s),
                Operator(op) => Operator(-&op),
            },
            Expr::Add(a, b) => match (a.elaborate()?, b.elaborate()?) {
                (Scalar(x), Scalar(y)) => Scalar(&x + &y),
                (Operator(f), Operator(g)) => Operator(&f + &g),
                _ => return Err(ill_typed("cannot add a scalar and an operator")),
            },
            Expr::Sub(a, b) => match (a.elaborate()?, b.elaborate()?) {
                (Scalar(x), Scalar(y)) => Scalar(&x - &y),
                (Operator(f), Operator(g)) => Operator(&f - &g),
                _ => return Err(ill_typed("cannot subtract a scalar and an operator")),
            },
            Expr::Mul(a, b) => match (a.elaborate()?, b.elaborate()?) {
                (Scalar(x), Scalar(y)) => Scalar(&x * &y),
                (Scalar(c), Operator(f)) => Operator(f.scale(&c)),
                (Operator(f), Scalar(c)) => Operator(f.compose(&OperatorFunc::scalar(c))),
                (Operator(f), Operator(g)) => Operator(f.compose(&g)),
            },
            Expr::Div(a, b) => match (a.elaborate()?, b.elaborate()?) {
                (_, Scalar(y)) if y.is_zero() => return Err(Error::DivisionByZero),
                (Scalar(x), Scalar(y)) => Scalar(x.checked_div(&y)?),
                (Operator(f), Scalar(y)) => Operator(f.scale(&y.inv()?)),
                _ => return Err(ill_typed("cannot divide by an operator")),
            },
            Expr::Pow(base, k) => match base.elaborate()? {
                Scalar(x) => {
                    if x.is_zero() && *k == 0 {
                        Scalar(RatFunc::one())
                    } else {
                        Scalar(x.pow(*k))
                    }
                }
                Operator(f) => Operator(f.pow(*k)),
            },
        })
    }
}

pub fn parse_value_in(text: &str, var: &str) -> Result<Value> {
    parse_expr_in(text, var)?.elaborate()
}

pub fn parse_operator(text: &str) -> Result<OperatorFunc> {
    match parse_value_in(text, "t")? {
        Value::Operator(op) => Ok(op),
        Value::Scalar(s) => Err(Error::Elaboration(format!(
            "expected an operator, found the scalar {s} (write {s}*id for a multiple of the identity)"
        ))),
    }
}

pub fn parse_ratfunc_in(text: &str, var: &str) -> Result<RatFunc> {
    match parse_value_in(text, var)? {
        Value::Scalar(s) => Ok(s),
        Value::Operator(_) => Err(Error::Elaboration(
            "expected a scalar, found an operator".to_string(),
        )),
    }
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    parse_ratfunc_in(text, "t")
}

/// Parses a polynomial in `var` (the denominator must be constant).
pub fn parse_poly_in(text: &str, var: &str) -> Result<Poly> {
    let r = parse_ratfunc_in(text, var)?;
    if !r.is_polynomial() {
        return Err(Error::Elaboration(format!(
            "expected a polynomial in {var}, found {}",
            r.display_with(var)
        )));
    }
    Ok(r.num().clone())
}
