//! Recursive-descent parser for tensor expressions.
//!
//! ```text
//! expr    := "0" | [sign] term (sign term)*
//! term    := [number ["*"]] slot ("@" slot)*
//! slot    := ident | "(" lincomb ")"
//! lincomb := [sign] [number ["*"]] ident (sign [number ["*"]] ident)*
//! number  := digits ["." digits] ["/" digits]
//! ident   := [A-Za-z][A-Za-z0-9_^]*
//! ```
//!
//! Whitespace is free between tokens; `2x` reads as `2 x`.

use num::{One, Zero};

use super::{SlotVector, TensorExpr, Term};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

/// Parses an expression with exact rational coefficients.
pub fn parse(input: &str) -> Result<TensorExpr<Rational>> {
    let mut p = Parser { src: input, pos: 0 };
    let e = p.expr()?;
    e.validate()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.src.as_bytes().get(self.pos).is_some_and(|&b| f(b)) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn number(&mut self) -> Result<Option<Rational>> {
        if !self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'.') {
            return Ok(None);
        }
        let start = self.pos;
        self.take_while(|b| b.is_ascii_digit());
        if self.src.as_bytes().get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if self.take_while(|b| b.is_ascii_digit()).is_empty() {
                return self.err("expected digits after `.`");
            }
        }
        let save = self.pos;
        if self.eat(b'/') {
            self.skip_ws();
            if self.take_while(|b| b.is_ascii_digit()).is_empty() {
                self.pos = save;
                return self.err("expected a denominator after `/`");
            }
        }
        let text: String = self.src[start..self.pos].split_whitespace().collect();
        match parse_rational(&text) {
            Ok(r) => {
                self.eat(b'*');
                Ok(Some(r))
            }
            Err(e) => Err(Error::Syntax {
                pos: start,
                msg: e.to_string(),
            }),
        }
    }

    fn ident(&mut self) -> Result<String> {
        if !self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            return self.err("expected a symbol");
        }
        Ok(self
            .take_while(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'^')
            .to_string())
    }

    fn signed(negative: bool, c: Option<Rational>) -> Rational {
        let c = c.unwrap_or_else(Rational::one);
        if negative {
            -c
        } else {
            c
        }
    }

    fn expr(&mut self) -> Result<TensorExpr<Rational>> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let start = self.pos;
        if self.number()?.is_some_and(|c| c.is_zero()) && self.peek().is_none() {
            return Ok(TensorExpr::zero());
        }
        self.pos = start;

        let mut terms = Vec::new();
        let mut negative = self.sign().unwrap_or(false);
        loop {
            terms.push(self.term(negative)?);
            match self.sign() {
                Some(n) => negative = n,
                None if self.peek().is_none() => break,
                None => return self.err("expected `+`, `-` or `@`"),
            }
        }
        Ok(TensorExpr { terms })
    }

    fn term(&mut self, negative: bool) -> Result<Term<Rational>> {
        let coeff = Self::signed(negative, self.number()?);
        let mut slots = vec![self.slot()?];
        while self.eat(b'@') {
            slots.push(self.slot()?);
        }
        Ok(Term { coeff, slots })
    }

    fn slot(&mut self) -> Result<SlotVector<Rational>> {
        if !self.eat(b'(') {
            return Ok(SlotVector::symbol(&self.ident()?));
        }
        let mut entries = Vec::new();
        let mut negative = self.sign().unwrap_or(false);
        loop {
            let c = Self::signed(negative, self.number()?);
            entries.push((self.ident()?, c));
            match self.sign() {
                Some(n) => negative = n,
                None if self.eat(b')') => break,
                None => return self.err("expected `+`, `-` or `)`"),
            }
        }
        Ok(SlotVector { entries })
    }
}
