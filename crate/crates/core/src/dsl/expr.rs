//! Arithmetic expressions over named variables, as written in scripts:
//! `Z^2/x`, `(Z - x)/x`, `3*x*y - 1`.

use std::fmt;

use num_bigint::BigInt;

use crate::algebra::fraction::LocalFraction;
use crate::algebra::poly::{Polynomial, Vars};
use crate::algebra::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) => 5,
        }
    }

    /// Names of the variables occurring in the expression, in order of
    /// first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Evaluates in the localization of `field[vars]` at `prime`
    /// (the fraction field when `prime` is empty).
    pub fn to_fraction(&self, field: Field, vars: &Vars, prime: &[usize]) -> Result<LocalFraction> {
        let lift = |p: Polynomial| LocalFraction::from_poly(p, prime);
        Ok(match self {
            Expr::Num(n) => lift(Polynomial::constant(field, vars, field.from_bigint(n))),
            Expr::Var(v) => lift(Polynomial::var_named(field, vars, v)?),
            Expr::Neg(a) => a.to_fraction(field, vars, prime)?.try_mul(&lift(Polynomial::constant(
                field,
                vars,
                field.from_i64(-1),
            )))?,
            Expr::Add(a, b) => a.to_fraction(field, vars, prime)?.try_add(&b.to_fraction(field, vars, prime)?)?,
            Expr::Sub(a, b) => a.to_fraction(field, vars, prime)?.try_sub(&b.to_fraction(field, vars, prime)?)?,
            Expr::Mul(a, b) => a.to_fraction(field, vars, prime)?.try_mul(&b.to_fraction(field, vars, prime)?)?,
            Expr::Div(a, b) => a.to_fraction(field, vars, prime)?.try_div(&b.to_fraction(field, vars, prime)?)?,
            Expr::Pow(a, e) => a.to_fraction(field, vars, prime)?.pow(*e),
        })
    }

    /// Evaluates to a polynomial; division is allowed only by nonzero constants.
    pub fn to_polynomial(&self, field: Field, vars: &Vars) -> Result<Polynomial> {
        self.to_fraction(field, vars, &[])?
            .as_polynomial()
            .ok_or_else(|| Error::Parse(format!("'{self}' is not a polynomial")))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        let wrap = |e: &Expr, strict: bool| {
            let q = e.precedence();
            if q < p || (strict && q == p) {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, false)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, false), wrap(b, true)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, false), wrap(b, true)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, false), wrap(b, true)),
            Expr::Div(a, b) => write!(f, "{}/{}", wrap(a, false), wrap(b, true)),
            Expr::Pow(a, e) => write!(f, "{}^{e}", wrap(a, true)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' at offset {i}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(usize::MAX)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        match self.toks.get(self.pos) {
            Some((t, o)) => Error::Parse(format!("{what}, found {t:?} at offset {o}")),
            None => Error::Parse(format!("{what}, found end of expression")),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat('/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let e = match self.peek() {
                Some(Tok::Num(n)) => u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?,
                _ => return Err(self.err("expected a non-negative integer exponent")),
            };
            self.pos += 1;
            base = Expr::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        let o = p.offset();
        return Err(Error::Parse(format!("trailing input at offset {o}")));
    }
    Ok(e)
}

/// Parses `text` as an element of the fraction field of `field[vars]`.
pub fn parse_fraction(text: &str, field: Field, vars: &Vars) -> Result<LocalFraction> {
    parse_expr(text)?.to_fraction(field, vars, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;

    #[test]
    fn precedence_and_printing() {
        let e = parse_expr("-x^2*y + (Z - x)/x - 3").unwrap();
        assert_eq!(e.to_string(), "-x^2*y + (Z - x)/x - 3");
        let nested = parse_expr("a - (b - c)").unwrap();
        assert_eq!(nested.to_string(), "a - (b - c)");
        assert_eq!(parse_expr(&nested.to_string()).unwrap(), nested);
        assert_eq!(parse_expr("(x^2)^3").unwrap().to_string(), "(x^2)^3");
        assert_eq!(parse_expr("(-x)^2").unwrap().to_string(), "(-x)^2");
    }

    #[test]
    fn evaluates_to_fraction() {
        let f = Field::Prime(5);
        let v = vars(&["x", "y", "Z"]);
        let a = parse_fraction("Z^2/x", f, &v).unwrap();
        let b = parse_fraction("Z*Z/x", f, &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Z^2/x");
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("x ^ y").is_err());
        assert!(parse_expr("(x").is_err());
        assert!(parse_expr("x $ y").is_err());
        let v = vars(&["x"]);
        assert!(matches!(parse_fraction("w", Field::Rational, &v), Err(Error::UnknownVariable(_))));
        assert!(parse_fraction("1/0", Field::Rational, &v).is_err());
    }
}
