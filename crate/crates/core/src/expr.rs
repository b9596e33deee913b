// SPDX-License-Identifier: Apache-2.0

//! A small expression language for vector-field components.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          right associative
//! atom  := number | xK | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Unary functions: `neg exp log abs sqrt sin cos`; binary: `min max`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Abs,
    Sqrt,
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprAst {
    Const(f64),
    /// Zero-based variable index (`x1` is `Var(0)`).
    Var(usize),
    Unary(UnaryOp, Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("variable x{index} at byte {offset} exceeds dimension {dim}")]
    VariableOutOfRange { offset: usize, index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { offset: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::Syntax { offset: self.offset(), message: format!("expected `{c}`") })
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinaryOp::Add
            } else if self.eat('-') {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinaryOp::Mul
            } else if self.eat('/') {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(match inner {
                ExprAst::Const(c) => ExprAst::Const(-c),
                other => ExprAst::Unary(UnaryOp::Neg, Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            return Ok(ExprAst::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let offset = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(ParseError::Syntax { offset, message: "unexpected end of input".into() });
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(ExprAst::Const(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(ParseError::Syntax { offset, message: format!("unexpected `{c}`") }),
            Tok::Ident(name) => self.identifier(&name, offset),
        }
    }

    fn identifier(&mut self, name: &str, offset: usize) -> Result<ExprAst, ParseError> {
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if idx == 0 || idx > self.dim {
                return Err(ParseError::VariableOutOfRange { offset, index: idx, dim: self.dim });
            }
            return Ok(ExprAst::Var(idx - 1));
        }
        let unary = match name {
            "neg" => Some(UnaryOp::Neg),
            "exp" => Some(UnaryOp::Exp),
            "log" => Some(UnaryOp::Log),
            "abs" => Some(UnaryOp::Abs),
            "sqrt" => Some(UnaryOp::Sqrt),
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            _ => None,
        };
        if let Some(op) = unary {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(ExprAst::Unary(op, Box::new(arg)));
        }
        let binary = match name {
            "min" => Some(BinaryOp::Min),
            "max" => Some(BinaryOp::Max),
            _ => None,
        };
        if let Some(op) = binary {
            self.expect('(')?;
            let a = self.expr()?;
            self.expect(',')?;
            let b = self.expr()?;
            self.expect(')')?;
            return Ok(ExprAst::Binary(op, Box::new(a), Box::new(b)));
        }
        Err(ParseError::UnknownIdentifier { offset, name: name.to_string() })
    }
}

/// Parses `source` with variables `x1..x{dim}`.
pub fn parse_expr(source: &str, dim: usize) -> Result<ExprAst, ParseError> {
    let toks = tokenize(source)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: source.len(), dim };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Syntax { offset: p.offset(), message: "trailing input".into() });
    }
    Ok(ast)
}

fn check(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

impl ExprAst {
    /// Largest variable index used plus one.
    pub fn arity(&self) -> usize {
        match self {
            ExprAst::Const(_) => 0,
            ExprAst::Var(i) => i + 1,
            ExprAst::Unary(_, a) => a.arity(),
            ExprAst::Binary(_, a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        match self {
            ExprAst::Const(c) => Ok(*c),
            ExprAst::Var(i) => point
                .get(*i)
                .copied()
                .ok_or(EvalError::Dimension { expected: i + 1, got: point.len() }),
            ExprAst::Unary(op, a) => {
                let v = a.eval(point)?;
                check(match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Log if v <= 0.0 => return Err(EvalError::LogDomain(v)),
                    UnaryOp::Log => v.ln(),
                    UnaryOp::Abs => v.abs(),
                    UnaryOp::Sqrt if v < 0.0 => return Err(EvalError::SqrtDomain(v)),
                    UnaryOp::Sqrt => v.sqrt(),
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                })
            }
            ExprAst::Binary(op, a, b) => {
                let (x, y) = (a.eval(point)?, b.eval(point)?);
                check(match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div if y == 0.0 => return Err(EvalError::DivisionByZero),
                    BinaryOp::Div => x / y,
                    BinaryOp::Pow => pow(x, y)?,
                    BinaryOp::Min => x.min(y),
                    BinaryOp::Max => x.max(y),
                })
            }
        }
    }
}

fn pow(base: f64, exponent: f64) -> Result<f64, EvalError> {
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(EvalError::PowDomain { base, exponent });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(EvalError::DivisionByZero);
    }
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        Ok(base.powi(exponent as i32))
    } else {
        Ok(base.powf(exponent))
    }
}

/// Evaluates `ast` at `point`.
pub fn eval_expr(ast: &ExprAst, point: &[f64]) -> Result<f64, EvalError> {
    ast.eval(point)
}

impl fmt::Display for ExprAst {
    /// Fully parenthesized; reparses to an identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{:?})", -c),
            ExprAst::Const(c) => write!(f, "{c:?}"),
            ExprAst::Var(i) => write!(f, "x{}", i + 1),
            ExprAst::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            ExprAst::Unary(op, a) => {
                let name = match op {
                    UnaryOp::Neg => unreachable!(),
                    UnaryOp::Exp => "exp",
                    UnaryOp::Log => "log",
                    UnaryOp::Abs => "abs",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                };
                write!(f, "{name}({a})")
            }
            ExprAst::Binary(BinaryOp::Min, a, b) => write!(f, "min({a}, {b})"),
            ExprAst::Binary(BinaryOp::Max, a, b) => write!(f, "max({a}, {b})"),
            ExprAst::Binary(op, a, b) => {
                let sym = match op {
                    BinaryOp::Add => '+',
                    BinaryOp::Sub => '-',
                    BinaryOp::Mul => '*',
                    BinaryOp::Div => '/',
                    BinaryOp::Pow => '^',
                    BinaryOp::Min | BinaryOp::Max => unreachable!(),
                };
                write!(f, "({a} {sym} {b})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, dim: usize, p: &[f64]) -> Result<f64, EvalError> {
        parse_expr(src, dim).unwrap().eval(p)
    }

    #[test]
    fn exp_sum_component_parses() {
        let ast = parse_expr("exp(-(x1+x2))", 3).unwrap();
        assert_eq!(ast.eval(&[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((ast.eval(&[1.0, 0.0, 0.0]).unwrap() - 0.367_879_4).abs() < 1e-7);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("x1", 1).unwrap(), ExprAst::Var(0));
        assert_eq!(ev("x1^2", 1, &[-1.0]).unwrap(), 1.0);
        assert_eq!(ev("-x1^2", 1, &[3.0]).unwrap(), -9.0);
        assert_eq!(ev("2^3^2", 0, &[]).unwrap(), 512.0);
        assert_eq!(ev("2^-1", 0, &[]).unwrap(), 0.5);
        assert_eq!(ev("1 - 2 - 3", 0, &[]).unwrap(), -4.0);
        assert_eq!(ev("8 / 4 / 2", 0, &[]).unwrap(), 1.0);
        assert_eq!(ev("1 + 2 * 3", 0, &[]).unwrap(), 7.0);
        assert_eq!(ev("min(x1, 2*x1)", 1, &[-1.0]).unwrap(), -2.0);
        assert_eq!(ev("1.5e2 + 1e-1", 0, &[]).unwrap(), 150.1);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(ev("log(x1)", 1, &[0.0]), Err(EvalError::LogDomain(0.0)));
        assert_eq!(ev("1 / x1", 1, &[0.0]), Err(EvalError::DivisionByZero));
        assert!(matches!(ev("x1 ^ 0.5", 1, &[-4.0]), Err(EvalError::PowDomain { .. })));
        assert_eq!(ev("x1 ^ 3", 1, &[-2.0]).unwrap(), -8.0);
        assert!(matches!(ev("sqrt(x1)", 1, &[-1.0]), Err(EvalError::SqrtDomain(_))));
        assert_eq!(ev("exp(x1)", 1, &[1e6]), Err(EvalError::NonFinite));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(
            parse_expr("x1 + foo(x1)", 1),
            Err(ParseError::UnknownIdentifier { offset: 5, name: "foo".into() })
        );
        assert_eq!(
            parse_expr("x1 + x3", 2),
            Err(ParseError::VariableOutOfRange { offset: 5, index: 3, dim: 2 })
        );
        assert!(matches!(parse_expr("(x1 + 1", 1), Err(ParseError::Syntax { offset: 7, .. })));
        assert!(matches!(parse_expr("x1 $ 2", 1), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(parse_expr("", 1).is_err());
        assert!(parse_expr("x1 x1", 1).is_err());
    }

    #[test]
    fn print_reparses_identically() {
        for src in ["exp(-(x1+x2))", "-x1^2", "min(x1, -2.5*x2)", "x1 - -3", "abs(x1)/(1+x2^2)", "-0"] {
            let ast = parse_expr(src, 2).unwrap();
            assert_eq!(parse_expr(&ast.to_string(), 2).unwrap(), ast, "{src} -> {ast}");
        }
    }
}
