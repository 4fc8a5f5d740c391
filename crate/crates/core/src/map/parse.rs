//! Recursive-descent parser for rational-function expressions in `x`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | '(' expr ')'
//! ```
//!
//! Rational literals such as `3/4` are ordinary divisions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::arith::IntPoly;
use crate::error::{Error, Result};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

/// A rational function `num / den` in lowest terms with `den` having positive
/// leading coefficient and joint content 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RatFunc {
    fn constant(c: BigInt) -> Self {
        RatFunc { num: IntPoly::constant(c), den: IntPoly::one() }
    }

    fn x() -> Self {
        RatFunc { num: IntPoly::from_i64(&[0, 1]), den: IntPoly::one() }
    }

    fn normalized(num: IntPoly, den: IntPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc { num, den: IntPoly::one() };
        }
        let g = num.gcd(&den).expect("denominator nonzero");
        // g is primitive, so both quotients are integral by Gauss's lemma
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_negative() {
            c = -c;
        }
        num = num.div_scalar(&c);
        den = den.div_scalar(&c);
        RatFunc { num, den }
    }

    fn add(&self, o: &RatFunc) -> RatFunc {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::normalized(num, &self.den * &o.den)
    }

    fn sub(&self, o: &RatFunc) -> RatFunc {
        let num = &(&self.num * &o.den) - &(&o.num * &self.den);
        RatFunc::normalized(num, &self.den * &o.den)
    }

    fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        if o.num.is_zero() {
            return None;
        }
        Some(RatFunc::normalized(&self.num * &o.den, &self.den * &o.num))
    }

    fn pow(&self, e: u32) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' | 'X' => Tok::X,
            d if d.is_ascii_digit() => {
                let mut end = i + 1;
                while let Some(&(j, e)) = chars.peek() {
                    if !e.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                Tok::Num(s[i..end].parse().expect("digits parse"))
            }
            other => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push((i, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .ok_or_else(|| Error::Parse { pos: at, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let e: u32 = match u32::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return self.err(format!("exponent exceeds {MAX_EXPONENT}")),
                };
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => self.err("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(n))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(RatFunc::x())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, 'x' or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression into a reduced rational function.
pub fn parse_rational_function(text: &str) -> Result<RatFunc> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

impl RatFunc {
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }
}
