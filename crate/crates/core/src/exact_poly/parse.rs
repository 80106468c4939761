//! Plain-text polynomial syntax and canonical printing.
//!
//! Grammar: integers and rationals (`3/2`), named variables, `+ - * ^` and
//! parentheses; multiplication is always explicit and unknown identifiers are
//! rejected.

use num_bigint::BigInt;

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::Parse { pos: start, msg: format!("unexpected character `{c}`") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    field: &'a K,
    vars: &'a [&'a str],
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl<'a, K: Field> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly<K>> {
        let n = self.vars.len();
        let mut acc = Poly::zero(self.field, n);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => sign = false,
                Some(Tok::Minus) => sign = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Poly<K>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let den = match self.peek() {
                        Some(Tok::Num(d)) => d.clone(),
                        _ => return self.err("division is only allowed by an integer literal"),
                    };
                    self.pos += 1;
                    let inv = match self.field.from_ratio(&BigInt::from(1), &den) {
                        Some(v) => v,
                        None => return self.err("division by zero in this field"),
                    };
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly<K>> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(e)) => e.clone(),
                _ => return self.err("expected a non-negative integer exponent"),
            };
            let e: u32 = match e.try_into() {
                Ok(e) => e,
                Err(_) => return self.err("exponent out of range"),
            };
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<K>> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Poly::constant(self.field, n, self.field.from_bigint(&v)))
            }
            Some(Tok::Ident(name)) => {
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None => return self.err(format!("unknown identifier `{name}`")),
                };
                self.pos += 1;
                Ok(Poly::var(self.field, n, idx))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                let inner = self.power()?;
                Ok(-&inner)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over `field` in the named variables.
pub fn parse_poly<K: Field>(field: &K, vars: &[&str], text: &str) -> Result<Poly<K>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { field, vars, toks, pos: 0, len: text.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a field element such as `3`, `-2` or `3/2`.
pub fn parse_scalar<K: Field>(field: &K, text: &str) -> Result<K::Elem> {
    let p = parse_poly(field, &[], text)?;
    if !p.is_constant() {
        return Err(Error::Parse { pos: 0, msg: format!("`{text}` is not a constant") });
    }
    Ok(p.constant_term())
}

/// Parses comma-separated coordinates, e.g. `0,1/2,-1`.
pub fn parse_point<K: Field>(field: &K, text: &str) -> Result<Vec<K::Elem>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|c| parse_scalar(field, c)).collect()
}

/// Canonical text of a polynomial using the given variable names.
pub fn format_poly<K: Field, S: AsRef<str>>(p: &Poly<K>, names: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field();
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = field.sign_split(c);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        let unit = field.is_one(&mag);
        if mono.is_empty() {
            out.push_str(&field.render(&mag));
        } else if unit {
            out.push_str(&mono.join("*"));
        } else {
            out.push_str(&field.render(&mag));
            out.push('*');
            out.push_str(&mono.join("*"));
        }
    }
    out
}

/// Default variable names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}
