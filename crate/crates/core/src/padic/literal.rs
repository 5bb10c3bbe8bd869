//! Matrix literals such as `p^1 * (2 + t), 0; 1, p^-1 * 3`.
//!
//! Entries are sums and products of integers, `p`, the generator `t` and
//! parenthesized subexpressions; `^` takes an integer exponent.

use super::element::PadicElement;
use super::field::Unramified;
use super::matrix::PadicMatrix;
use crate::{Error, Result};
use std::sync::Arc;

struct Parser<'a> {
    ring: &'a Arc<Unramified>,
    s: &'a [u8],
    pos: usize,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(format!("matrix literal: {}", msg.into()))
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| bad(format!("expected an integer at offset {start}")))
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn expr(&mut self) -> Result<PadicElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PadicElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PadicElement> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(bad("unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                self.pos += 1;
                let e = self.exponent()?;
                Ok(PadicElement::p_power(self.ring, e))
            }
            Some(b't') => {
                self.pos += 1;
                let e = self.exponent()?;
                if e < 0 {
                    return Err(bad("negative power of t"));
                }
                Ok(PadicElement::generator(self.ring).pow(e as u64))
            }
            Some(c) if c.is_ascii_digit() => Ok(PadicElement::from_int(self.ring, self.int()?)),
            Some(c) => Err(bad(format!("unexpected character '{}'", c as char))),
            None => Err(bad("unexpected end of entry")),
        }
    }
}

pub fn parse_element(ring: &Arc<Unramified>, text: &str) -> Result<PadicElement> {
    let mut p = Parser { ring, s: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(bad(format!("trailing input in '{text}'")));
    }
    Ok(v)
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(ring: &Arc<Unramified>, text: &str) -> Result<PadicMatrix> {
    let rows: Vec<Vec<PadicElement>> = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(';')
        .map(|row| row.split(',').map(|e| parse_element(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let d = rows.len();
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad("ragged rows"));
    }
    let c = rows[0].len();
    Ok(PadicMatrix::from_entries(d, c, rows.into_iter().flatten().collect()))
}
