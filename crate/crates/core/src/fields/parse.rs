//! Element expressions.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] int)*
//! atom   := int | 't' | 'a' | '(' expr ')'
//! ```
//!
//! Integers are reduced mod `p`. `t` is the function field variable and `a`
//! the class of `x` in `F_p[x]/(m)` for non-prime constant fields.

use std::str::FromStr;
use std::sync::Arc;

use super::finite::{prime_power, FiniteField, Fq};
use super::rational::{FunctionField, FunctionFieldElement};
use super::FieldError;

/// Parsed `field F<q>(t)` or `field F<q>` header line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldHeader {
    pub q: u64,
    pub rational: bool,
}

impl FieldHeader {
    pub fn constants(&self) -> Result<FiniteField, FieldError> {
        FiniteField::of_order(self.q)
    }
}

impl FromStr for FieldHeader {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse {
            pos: 0,
            message: format!(
                "expected `field F<q>` or `field F<q>(t)`, found `{}`",
                s.trim()
            ),
        };
        let rest = s.trim().strip_prefix("field").ok_or_else(bad)?.trim();
        let rest = rest.strip_prefix('F').ok_or_else(bad)?;
        let (digits, rational) = match rest.strip_suffix("(t)") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let q: u64 = digits.trim().parse().map_err(|_| bad())?;
        prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Ok(FieldHeader { q, rational })
    }
}

/// An element of either kind of field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Finite(Fq),
    Rational(FunctionFieldElement),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Int(u64),
    T,
    A,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str, offset: usize) -> Result<Vec<(usize, Tok)>, FieldError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = offset + i;
        let tok = match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i].parse().map_err(|_| FieldError::Parse {
                    pos,
                    message: "integer literal too large".into(),
                })?;
                out.push((pos, Tok::Int(n)));
                continue;
            }
            't' => Tok::T,
            'a' => Tok::A,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(FieldError::Parse {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    kt: &'a FunctionField,
    allow_t: bool,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FieldError> {
        Err(FieldError::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<FunctionFieldElement, FieldError> {
        let kt = self.kt;
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                kt.neg(&self.term()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ (Tok::Plus | Tok::Minus)) = self.peek() {
            self.at += 1;
            let rhs = self.term()?;
            acc = if op == Tok::Plus {
                kt.add(&acc, &rhs)
            } else {
                kt.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FunctionFieldElement, FieldError> {
        let mut acc = self.unary()?;
        while let Some(op @ (Tok::Star | Tok::Slash)) = self.peek() {
            self.at += 1;
            let pos = self.pos();
            let rhs = self.unary()?;
            acc = if op == Tok::Star {
                self.kt.mul(&acc, &rhs)
            } else {
                self.kt
                    .div(&acc, &rhs)
                    .map_err(|_| FieldError::ParseDivisionByZero { pos })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FunctionFieldElement, FieldError> {
        if self.peek() == Some(Tok::Minus) {
            self.at += 1;
            let v = self.unary()?;
            return Ok(self.kt.neg(&v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FunctionFieldElement, FieldError> {
        let mut base = self.atom()?;
        while self.peek() == Some(Tok::Caret) {
            self.at += 1;
            let negative = self.peek() == Some(Tok::Minus);
            if negative {
                self.at += 1;
            }
            let pos = self.pos();
            let Some(Tok::Int(e)) = self.peek() else {
                return self.err("expected an integer exponent");
            };
            self.at += 1;
            let e = i64::try_from(e).map_err(|_| FieldError::Parse {
                pos,
                message: "exponent too large".into(),
            })?;
            base = self
                .kt
                .pow(&base, if negative { -e } else { e })
                .map_err(|_| FieldError::ParseDivisionByZero { pos })?;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FunctionFieldElement, FieldError> {
        let k = self.kt.constants();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(self.kt.from_int((n % k.characteristic()) as i64))
            }
            Some(Tok::T) if self.allow_t => {
                self.at += 1;
                Ok(self.kt.t())
            }
            Some(Tok::T) => self.err("`t` is not available over a finite field"),
            Some(Tok::A) if k.degree() > 1 => {
                self.at += 1;
                Ok(self.kt.constant(k.generator()))
            }
            Some(Tok::A) => self.err("`a` is only available over non-prime fields"),
            Some(Tok::LParen) => {
                self.at += 1;
                let v = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(v)
            }
            Some(_) => self.err("expected a coefficient, `t`, or `(`"),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn parse_with(
    kt: &FunctionField,
    text: &str,
    offset: usize,
    allow_t: bool,
) -> Result<FunctionFieldElement, FieldError> {
    let toks = tokenize(text, offset)?;
    let mut p = Parser {
        kt,
        allow_t,
        toks,
        at: 0,
        end: offset + text.len(),
    };
    let v = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Parses an element of `F_q(t)`. `offset` shifts reported error positions.
pub fn parse_rational(
    kt: &FunctionField,
    text: &str,
    offset: usize,
) -> Result<FunctionFieldElement, FieldError> {
    parse_with(kt, text, offset, true)
}

/// Parses an element of `F_q`.
pub fn parse_finite(k: &Arc<FiniteField>, text: &str, offset: usize) -> Result<Fq, FieldError> {
    let kt = FunctionField::new(k.clone());
    let v = parse_with(&kt, text, offset, false)?;
    Ok(v.as_constant().expect("no variable was allowed"))
}

/// Parses an element according to a header.
pub fn parse_element(header: &FieldHeader, text: &str) -> Result<Element, FieldError> {
    let k = Arc::new(header.constants()?);
    if header.rational {
        Ok(Element::Rational(parse_rational(
            &FunctionField::new(k),
            text,
            0,
        )?))
    } else {
        Ok(Element::Finite(parse_finite(&k, text, 0)?))
    }
}
