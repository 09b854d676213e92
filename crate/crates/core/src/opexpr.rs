//! Text form of operators.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint)?
//! atom   := integer | symbol | 'D[' var ']' | '(' expr ')'
//! ```
//!
//! Products compose left to right and are not commutative: `D[r]*r` is
//! `r*D[r] + 1`. A divisor must be a plain function (no derivatives).
//! `i` is the imaginary unit.

use std::sync::Arc;

use crate::coeffring::{Expr, Scalar, Var};
use crate::error::{Error, Result};
use crate::weyl::{DiffOp, VariableSpec};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            let n = s
                .parse::<i64>()
                .map_err(|_| Error::Parse { line: l0, col: c0, msg: format!("integer `{s}` too large") })?;
            out.push(Spanned { tok: Tok::Int(n), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            col += k - start;
            out.push(Spanned { tok: Tok::Ident(chars[start..k].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if "+-*/^()[]".contains(c) {
            out.push(Spanned { tok: Tok::Op(c), line: l0, col: c0 });
            col += 1;
            k += 1;
            continue;
        }
        return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    spec: &'a Arc<VariableSpec>,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<DiffOp> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffOp> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.compose(&self.unary()?)?;
            } else if self.eat('/') {
                let here = self.here();
                let d = self.unary()?;
                let f = match order_zero(&d) {
                    Some(f) if !f.is_zero() => f,
                    _ => {
                        return Err(Error::Parse {
                            line: here.0,
                            col: here.1,
                            msg: "divisor must be a nonzero function".into(),
                        })
                    }
                };
                let inv = self.spec.ctx().reduce(&f.inv()?)?;
                acc = acc.compose(&DiffOp::mult(self.spec, inv))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<DiffOp> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<DiffOp> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(e)) if (0..=64).contains(&e) => {
                    self.pos += 1;
                    return base.pow(e as u32);
                }
                _ => return self.err("expected a small non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffOp> {
        let spec = self.spec;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(DiffOp::mult(spec, Expr::int(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) if name == "D" => {
                self.pos += 1;
                self.expect('[')?;
                let here = self.here();
                let v = match self.peek().cloned() {
                    Some(Tok::Ident(s)) => s,
                    _ => return self.err("expected a variable name"),
                };
                self.pos += 1;
                self.expect(']')?;
                let var = Var::from_name(&v).ok_or(Error::UnknownVariable(v.clone()))?;
                DiffOp::d(spec, var).map_err(|_| Error::Parse {
                    line: here.0,
                    col: here.1,
                    msg: format!("`{v}` is not a space variable of chart `{}`", spec.name()),
                })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(DiffOp::mult(spec, Expr::i()));
                }
                match Var::from_name(&name) {
                    Some(v) if spec.allows_symbol(v) => Ok(DiffOp::mult(spec, Expr::var(v))),
                    _ => Err(Error::UnknownVariable(name)),
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn order_zero(a: &DiffOp) -> Option<Expr> {
    if a.is_zero() {
        return Some(Expr::zero());
    }
    if a.order() == 0 {
        a.terms().values().next().cloned()
    } else {
        None
    }
}

/// Parses an operator on `spec`.
pub fn parse_operator(text: &str, spec: &Arc<VariableSpec>) -> Result<DiffOp> {
    let toks = lex(text)?;
    let end = toks.last().map_or((1, 1), |t| (t.line, t.col + 1));
    let mut p = Parser { toks, pos: 0, spec, end };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let op = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(op)
}

/// Parses a function (an operator without derivatives).
pub fn parse_function(text: &str, spec: &Arc<VariableSpec>) -> Result<Expr> {
    let op = parse_operator(text, spec)?;
    order_zero(&op).ok_or_else(|| Error::Invalid(format!("`{text}` contains derivatives")))
}

/// Canonical text; `parse_operator(&print_operator(a))` reproduces `a`.
pub fn print_operator(a: &DiffOp) -> String {
    a.to_string()
}

/// A rational scalar from text like `3/2` or `-1`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let spec = VariableSpec::line_r();
    let f = parse_function(text, &spec)?;
    f.constant_value().ok_or_else(|| Error::Invalid(format!("`{text}` is not a constant")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ru() -> Arc<VariableSpec> {
        VariableSpec::r_u()
    }

    #[test]
    fn commutator_text_is_identity() {
        let a = parse_operator("D[r]*r - r*D[r]", &ru()).unwrap();
        assert_eq!(a, DiffOp::identity(&ru()));
    }

    #[test]
    fn leading_term_text() {
        let a = parse_operator("2*u*(r^2-u)*D[u]^2", &ru()).unwrap();
        let c = (&Expr::var(Var::U) * &(&Expr::var(Var::R).pow(2).unwrap() - &Expr::var(Var::U))).scale(&Scalar::int(2));
        assert_eq!(a, DiffOp::monomial(&ru(), c, &[(Var::U, 2)]).unwrap());
    }

    #[test]
    fn unknown_derivative_symbol() {
        assert!(matches!(parse_operator("D[q]", &ru()), Err(Error::UnknownVariable(s)) if s == "q"));
        assert!(matches!(parse_operator("q*D[r]", &ru()), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse_operator("D[x]", &ru()), Err(Error::Parse { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_operator("r +\n  * u", &ru()) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_operator("r/D[r]", &ru()), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("(r", &ru()), Err(Error::Parse { .. })));
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "-1/2*r*D[r]^2 - 2*r*u*D[u]^2 + (beta + 1)*D[r] - i*mu",
            "(r^2 - u)/(u)*D[u] + 3/4",
            "D[r]*D[u]*r*u",
            "(1/2-3*i)*D[u]",
        ] {
            let a = parse_operator(text, &ru()).unwrap();
            let printed = print_operator(&a);
            let b = parse_operator(&printed, &ru()).unwrap();
            assert_eq!(a, b, "{text} -> {printed}");
            assert_eq!(print_operator(&b), printed);
        }
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("3/2").unwrap(), Scalar::ratio(3, 2));
        assert_eq!(parse_scalar("-4").unwrap(), Scalar::int(-4));
        assert!(parse_scalar("r").is_err());
    }
}
