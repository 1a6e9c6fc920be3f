use std::sync::Arc;

use super::poly::{Polynomial, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, col));
                i += 1;
            }
            '-' | '−' => {
                out.push((Token::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, col));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, col));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, col));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Token::Int(chars[start..i].iter().collect()), col));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Token::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(Error::Parse {
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    ring: &'a Arc<Ring>,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            if let Some(Token::Minus) = self.peek() {
                return self.err("negative exponent");
            }
            let Some(Token::Int(digits)) = self.peek().cloned() else {
                return self.err("expected a non-negative integer exponent");
            };
            let n: u64 = digits.parse().map_err(|_| Error::ExponentOverflow)?;
            self.pos += 1;
            if let Some(Token::Caret) = self.peek() {
                return self.err("chained exponents need parentheses");
            }
            return base.pow(n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Token::Int(digits)) => {
                self.pos += 1;
                let p = self.ring.p();
                let v = digits.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(Polynomial::constant(self.ring, v as i64))
            }
            Some(Token::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.ring, i))
                }
                None => self.err(format!("unknown identifier {name:?}")),
            },
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression over the ring's variables using integer literals,
/// `+ - * ^` and parentheses. Coefficients are reduced mod p.
pub fn parse_polynomial(src: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        ring,
        end_col: src.chars().count() + 1,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(poly)
}

impl Ring {
    /// Shorthand for [`parse_polynomial`].
    pub fn parse(self: &Arc<Self>, src: &str) -> Result<Polynomial> {
        parse_polynomial(src, self)
    }
}
