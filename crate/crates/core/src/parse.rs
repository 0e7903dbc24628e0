//! Text form of polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | name | '(' expr ')'
//! ```
//!
//! The Unicode minus sign is accepted in place of `-`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarNames {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `x, y, z` for up to three variables, `x, y, z, t` for four, and
    /// `x1 .. xn` beyond that.
    pub fn default_for(nvars: usize) -> Self {
        match nvars {
            0..=3 => Self::new(["x", "y", "z"].into_iter().take(nvars)),
            4 => Self::new(["x", "y", "z", "t"]),
            _ => Self::new((1..=nvars).map(|i| format!("x{i}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .or_else(|| self.names.iter().position(|n| n.eq_ignore_ascii_case(name)))
    }

    pub fn uppercase(&self) -> VarNames {
        VarNames::new(self.names.iter().map(|n| n.to_uppercase()))
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        let mut p = Parser {
            src: text,
            pos: 0,
            names: self,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Canonical printer: terms in descending canonical order.
    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let a = c.abs();
            let coef = if a.is_integer() {
                a.to_integer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            if m.is_one() {
                out.push_str(&coef);
            } else if a.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                out.push_str(&coef);
                out.push('*');
                out.push_str(&self.format_monomial(m));
            }
        }
        out
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn is_minus(c: char) -> bool {
        c == '-' || c == '\u{2212}'
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.nvars());
        let mut sign = match self.peek() {
            Some(c) if Self::is_minus(c) => {
                self.bump();
                -1
            }
            Some('+') => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => {
                    self.bump();
                    sign = 1;
                }
                Some(c) if Self::is_minus(c) => {
                    self.bump();
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer_big()?;
                let mut value = Rational::from_integer(num);
                if self.peek() == Some('/') {
                    self.bump();
                    self.skip_ws();
                    let den = self.integer_big()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Poly::constant(self.nvars(), value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.peek_raw() {
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                let i = self
                    .names
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                Ok(Poly::var(self.nvars(), i))
            }
            Some(_) => Err(self.error("expected a number, a variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer_big(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits parse"))
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        let v = self.integer_big()?;
        u64::try_from(v).map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })
    }
}

/// Parses with the default variable names for `nvars` variables.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    VarNames::default_for(nvars).parse(text)
}
