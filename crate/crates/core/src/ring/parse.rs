//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: `expr := unary (('+'|'-') unary)*`, `unary := '-' unary | term`,
//! `term := power ('*' power)*`, `power := atom ('^' int)?`,
//! `atom := int ('/' int)? | ident | '(' expr ')'`.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{MultiPoly, PolyRing, Ring, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut it: Peekable<CharIndices> = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        if ch.is_whitespace() {
            it.next();
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((pos, Token::Int(s.parse().expect("digits"))));
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((pos, Token::Ident(s)));
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Token::Sym(ch)));
            it.next();
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} at {pos}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at offset {}", self.offset())))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('+') {
                let rhs = self.unary()?;
                acc = self.ring.add(&acc, &rhs);
            } else if self.eat('-') {
                let rhs = self.unary()?;
                acc = self.ring.sub(&acc, &rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(self.ring.neg(&inner));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.term()
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while self.eat('*') {
            let rhs = if self.peek() == Some(&Token::Sym('-')) { self.unary()? } else { self.power()? };
            acc = self.ring.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Token::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(self.ring.pow(&base, e))
                }
                _ => self.err("expected integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(n);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Token::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            value /= BigRational::from_integer(d);
                        }
                        _ => return self.err("expected nonzero denominator"),
                    }
                }
                let c = self.ring.coeffs().coerce(&Scalar::from_ratio(value))?;
                Ok(self.ring.constant(c))
            }
            Some(Token::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(self.ring.var(i))
                }
                None => Err(Error::VariableMismatch(format!("unknown variable {name}"))),
            },
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

pub(crate) fn parse_poly(ring: &PolyRing, src: &str) -> Result<MultiPoly> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { ring, tokens, pos: 0, len: src.len() };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
