//! A small parser for coefficient expressions such as
//! `3(z+2)(z^2+2z+2)/(z(z^2+1)) - 4z^-1`, evaluated in the coefficient ring.
//! Division is allowed by units times z^k times powers of the base 1+eps*z^gamma.

use crate::error::{Error, Result};
use crate::laurent::{Ctx, LaurentCoeff};
use crate::poly;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Z,
    M,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        i += 1;
        let t = match c {
            ' ' | '\t' | '\n' => continue,
            '0'..='9' => {
                let start = i - 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(
                    s[start..i]
                        .parse()
                        .map_err(|_| Error::Parse(format!("number in {s:?}")))?,
                )
            }
            'z' => Tok::Z,
            'm' => Tok::M,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(Error::Parse(format!("unexpected {other:?} in {s:?}"))),
        };
        out.push(t);
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: Ctx,
    m: i64,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<LaurentCoeff> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentCoeff> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = divide(&acc, &d).ok_or_else(|| {
                        self.err("divisor is not a unit monomial times a base power")
                    })?;
                }
                Some(Tok::Num(_) | Tok::Z | Tok::M | Tok::LParen) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentCoeff> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentCoeff> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(k)) = self.peek() else {
            return Err(self.err("expected exponent"));
        };
        self.pos += 1;
        let p = base.pow(k as u32);
        if neg {
            divide(&LaurentCoeff::one(self.ctx), &p)
                .ok_or_else(|| self.err("negative power of a non-unit"))
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<LaurentCoeff> {
        let t = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match t {
            Tok::Num(n) => Ok(LaurentCoeff::monomial(self.ctx, n, 0)),
            Tok::Z => Ok(LaurentCoeff::monomial(self.ctx, 1, 1)),
            Tok::M => Ok(LaurentCoeff::monomial(self.ctx, self.m, 0)),
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.err("expected )"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// a / d when d = unit * z^k * (1+eps z^gamma)^j.
pub fn divide(a: &LaurentCoeff, d: &LaurentCoeff) -> Option<LaurentCoeff> {
    let ctx = d.ctx();
    let md = ctx.md();
    let mut num = d.num_dense().to_vec();
    poly::trim(&mut num);
    let first = num.iter().position(|&c| c != 0)?;
    num.drain(..first);
    let mut j = 0i64;
    while num.len() > 1 {
        num = poly::div_base(&md, ctx.eps, ctx.gamma, &num)?;
        poly::trim(&mut num);
        j += 1;
    }
    let inv = md.inv(num[0])?;
    Some(
        a.scale(inv)
            .shift(-(d.lo() + first as i64))
            .mul_base_pow(d.den_pow() as i64 - j),
    )
}

/// Evaluates `src` with `m` bound to the given integer.
pub fn parse_coeff(ctx: Ctx, src: &str, m: i64) -> Result<LaurentCoeff> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ctx,
        m,
        src,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}
