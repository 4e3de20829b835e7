//! Parser for the polynomial text form: sums of products of integers,
//! variables `x1, x2, ...` (or another single-letter prefix), powers and
//! parentheses. `*` may be omitted between factors.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    prefix: char,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, prefix: char) -> Result<Vec<(usize, Tok)>> {
    let mut lx = Lexer {
        chars: text.char_indices().peekable(),
        prefix,
    };
    let mut out = Vec::new();
    let col_of = |byte: usize| text[..byte].chars().count() + 1;
    while let Some(&(i, ch)) = lx.chars.peek() {
        let col = col_of(i);
        if ch.is_whitespace() {
            lx.chars.next();
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{b7}' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let digits = lx.take_digits();
                out.push((col, Tok::Int(digits.parse().expect("digits"))));
                continue;
            }
            c if c == lx.prefix => {
                lx.chars.next();
                let digits = lx.take_digits();
                if digits.is_empty() {
                    return Err(err(col, format!("expected an index after `{c}`")));
                }
                let idx: usize = digits
                    .parse()
                    .map_err(|_| err(col, format!("variable index `{digits}` too large")))?;
                if idx == 0 {
                    return Err(err(col, "variable indices start at 1"));
                }
                out.push((col, Tok::Var(idx)));
                continue;
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        };
        lx.chars.next();
        out.push((col, tok));
    }
    Ok(out)
}

impl Lexer<'_> {
    fn take_digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, d)) = self.chars.peek() {
            if !d.is_ascii_digit() {
                break;
            }
            s.push(d);
            self.chars.next();
        }
        s
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            sign = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Int(_) | Tok::Var(_) | Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let col = self.col();
        let base = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Polynomial::constant(self.nvars, n)
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                if i > self.nvars {
                    return Err(err(
                        col,
                        format!("variable index {i} out of range (at most {})", self.nvars),
                    ));
                }
                Polynomial::var(self.nvars, i)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.col(), "expected `)`"));
                }
                self.pos += 1;
                e
            }
            Some(t) => return Err(err(col, format!("unexpected token {t:?}"))),
            None => return Err(err(col, "unexpected end of input")),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            let Some(Tok::Int(e)) = self.peek().cloned() else {
                return Err(err(col, "expected an exponent"));
            };
            self.pos += 1;
            let e = e
                .to_u32()
                .filter(|&e| e <= 1024)
                .ok_or_else(|| err(col, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}

/// Parses an integer polynomial in `nvars` variables named `{prefix}1`,
/// `{prefix}2`, ... Columns in errors are 1-based character positions.
pub fn parse_polynomial_with(text: &str, nvars: usize, prefix: char) -> Result<Polynomial> {
    let toks = lex(text, prefix)?;
    if toks.is_empty() {
        return Err(err(1, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        nvars,
        end_col: text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    // Constants built before any variable was seen carry the right length,
    // so every monomial has `nvars` exponents.
    Ok(e)
}

pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    parse_polynomial_with(text, nvars, 'x')
}
