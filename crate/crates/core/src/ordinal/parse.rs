//! ASCII ordinal notation.
//!
//! The canonical grammar is
//! `ordinal := "0" | term ("+" term)*`,
//! `term := nat | "w" | "w^" atom ("*" nat)? | "w" "*" nat`,
//! `atom := nat | "(" ordinal ")"`.
//! The parser accepts the infix generalisation of it (`+`, `*`, `^` with the
//! usual precedence, `^` right associative, parentheses anywhere) and
//! evaluates the expression, so `1+w` reads as `w`.

use super::oracle::OracleOp;
use super::Ordinal;
use crate::{Error, Result};

type Ops<'a> = &'a dyn Fn(OracleOp, &Ordinal, &Ordinal) -> Result<Ordinal>;

fn fast(op: OracleOp, a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    match op {
        OracleOp::Add => a.checked_add(b),
        OracleOp::Mul => a.checked_mul(b),
        OracleOp::Exp => a.pow(b),
    }
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    eval_with(text, &fast)
}

/// Evaluates an infix expression with the given operations, e.g. the
/// oracle's, instead of the normal-form arithmetic.
pub fn eval_with(text: &str, ops: Ops<'_>) -> Result<Ordinal> {
    let mut p = Parser::new(text, ops);
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error("'+', '*', '^' or end of input"));
    }
    Ok(v)
}

/// Parses an infix ordinal expression starting at `pos`, returning the value
/// and the position just after it. Used by callers embedding ordinals in
/// larger syntaxes.
pub(crate) fn parse_prefix(text: &str, pos: usize) -> Result<(Ordinal, usize)> {
    let mut p = Parser::new(text, &fast);
    p.pos = pos;
    let v = p.sum()?;
    Ok((v, p.pos))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ops: Ops<'a>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, ops: Ops<'a>) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            ops,
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Ordinal> {
        let mut acc = self.product()?;
        while self.eat(b'+') {
            let rhs = self.product()?;
            acc = (self.ops)(OracleOp::Add, &acc, &rhs)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            let rhs = self.power()?;
            acc = (self.ops)(OracleOp::Mul, &acc, &rhs)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.power()?;
            return (self.ops)(OracleOp::Exp, &base, &exp);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                let n: u64 = digits.parse().map_err(|_| Error::Parse {
                    pos: start,
                    expected: "natural number below 2^62".to_string(),
                })?;
                if n > super::MAX_COEFF {
                    return Err(Error::Parse {
                        pos: start,
                        expected: "natural number below 2^62".to_string(),
                    });
                }
                Ok(Ordinal::nat(n))
            }
            _ => Err(self.error("natural number, 'w' or '('")),
        }
    }
}
