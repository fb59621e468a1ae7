//! Point-set literals: `{1,4,9}`, `[w*3, w*4)`, `union(A, B, ...)`,
//! `coded(gamma=2, A)`.

use super::{Coding, PointSet};
use crate::ordinal::{parse::parse_prefix, Ordinal};
use crate::{Error, Result};

pub fn parse_pointset(text: &str) -> Result<PointSet> {
    let mut p = Cursor { text, pos: 0 };
    let s = p.set()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("end of input"));
    }
    Ok(s)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("'{tok}'")))
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let (v, pos) = parse_prefix(self.text, self.pos)?;
        self.pos = pos;
        Ok(v)
    }

    fn set(&mut self) -> Result<PointSet> {
        if self.eat("{") {
            let mut pts = Vec::new();
            if !self.eat("}") {
                loop {
                    pts.push(self.ordinal()?);
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(PointSet::from_points(pts));
        }
        if self.eat("[") {
            let lo = self.ordinal()?;
            self.expect(",")?;
            let hi = self.ordinal()?;
            self.expect(")")?;
            return Ok(PointSet::interval(lo, hi));
        }
        if self.eat("union(") {
            let mut acc = self.set()?;
            while self.eat(",") {
                acc = acc.union(&self.set()?)?;
            }
            self.expect(")")?;
            return Ok(acc);
        }
        if self.eat("coded(") {
            self.expect("gamma")?;
            self.expect("=")?;
            let gamma = self.ordinal()?;
            self.expect(",")?;
            let base = self.set()?;
            self.expect(")")?;
            return PointSet::coded(Coding::digits(&gamma)?, base);
        }
        Err(self.error("'{', '[', 'union(' or 'coded('"))
    }
}
