//! Text form of power sums.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := number | number '*'? atom | atom
//! atom   := 'x' ('^' signed_number)?
//! ```
//!
//! Numbers are decimal floats with an optional `e`/`E` exponent. Whitespace
//! is allowed between tokens.

use super::{PowerSum, PowerTerm};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Unsigned decimal float starting at the current (non-whitespace) byte.
    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let int_digits = self.digits();
        let mut frac_digits = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_digits = self.digits();
        }
        if int_digits + frac_digits == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>().map_err(|_| Error::Syntax {
            position: start,
            message: format!("malformed number '{text}'"),
        })
    }

    fn signed_number(&mut self) -> Result<f64> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let value = self.number()?;
        Ok(if negative { -value } else { value })
    }

    fn starts_number(&mut self) -> bool {
        matches!(self.peek(), Some(b'0'..=b'9' | b'.'))
    }

    /// `'x' ('^' signed_number)?`, returning the exponent.
    fn atom(&mut self) -> Result<f64> {
        if !self.eat(b'x') {
            return Err(self.error("expected 'x'"));
        }
        if self.eat(b'^') {
            self.signed_number()
        } else {
            Ok(1.0)
        }
    }

    fn term(&mut self, sign: f64) -> Result<PowerTerm> {
        let (coeff, exp, at) = if self.starts_number() {
            let at = self.pos;
            let c = self.number()?;
            if self.eat(b'*') || self.peek() == Some(b'x') {
                let at = self.pos;
                (c, self.atom()?, at)
            } else {
                (c, 0.0, at)
            }
        } else {
            let at = self.pos;
            (1.0, self.atom()?, at)
        };
        if exp <= -1.0 {
            return Err(Error::domain(format!(
                "not in L1(0,1): exponent {exp} at position {at}"
            )));
        }
        PowerTerm::new(sign * coeff, exp)
    }
}

/// Parses an expression into its canonical [`PowerSum`].
pub fn parse(text: &str) -> Result<PowerSum> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return Err(cur.error("empty expression"));
    }
    let mut terms = Vec::new();
    let mut sign = if cur.eat(b'-') {
        -1.0
    } else {
        cur.eat(b'+');
        1.0
    };
    loop {
        terms.push(cur.term(sign)?);
        sign = match cur.peek() {
            None => break,
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            Some(other) => {
                return Err(cur.error(format!("unexpected '{}'", other as char)));
            }
        };
        cur.pos += 1;
    }
    Ok(PowerSum::canonical(terms))
}

#[derive(Debug, Clone, Copy)]
pub(super) enum Precision {
    Exact,
    Significant12,
}

/// Shortest decimal that re-parses to `v`, switching to scientific notation
/// for very small or very large magnitudes.
fn shortest(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub(crate) fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().expect("formatted float")
}

pub(crate) fn format_number(v: f64, precision: Precision) -> String {
    match precision {
        Precision::Exact => shortest(v),
        Precision::Significant12 => shortest(round12(v)),
    }
}

pub(super) fn format_sum(f: &PowerSum, precision: Precision) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in f.terms().iter().enumerate() {
        let negative = t.coeff < 0.0;
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = format_number(t.coeff.abs(), precision);
        if t.exp == 0.0 {
            out.push_str(&magnitude);
            continue;
        }
        if magnitude != "1" {
            out.push_str(&magnitude);
            out.push('*');
        }
        out.push('x');
        let exp = format_number(t.exp, precision);
        if exp != "1" {
            out.push('^');
            out.push_str(&exp);
        }
    }
    out
}
