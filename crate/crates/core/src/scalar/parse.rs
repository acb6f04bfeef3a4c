//! Lexer and expression parser shared by the polynomial and form grammars.
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := power (('*' | '/' | '^') power)*
//! power := atom ['^' INT]
//! atom  := INT | 'i' | 'varpi' | NAME | 'E' '[' INT (',' INT)* ']'
//!        | NAME '(' expr ')' | '(' expr ')'
//! ```
//!
//! A caret followed by an integer is a power; a caret between two factors is
//! a product (the wedge, in the form grammar).

use super::gauss::GaussRational;
use super::ScalarError;
use num::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ScalarError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Name(chars[start..k].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            _ => return Err(ScalarError::parse(col, format!("unexpected character '{c}'"))),
        };
        out.push((t, col));
        k += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// What the parser builds values with.
pub(crate) trait Builder {
    type Out: Clone;
    fn constant(&self, c: GaussRational) -> Self::Out;
    fn name(&self, name: &str) -> Option<Self::Out>;
    fn mode(&self, m: Vec<i64>) -> Result<Self::Out, String>;
    fn add(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn neg(&self, a: &Self::Out) -> Self::Out;
    fn mul(&self, a: &Self::Out, b: &Self::Out) -> Self::Out;
    fn as_constant(&self, a: &Self::Out) -> Option<GaussRational>;
    fn call(&self, func: &str, arg: &Self::Out) -> Result<Self::Out, String>;
    /// Whether `a ^ b` between two factors is allowed as a product.
    fn caret_product(&self) -> bool;
}

pub(crate) struct Parser<'a, B: Builder> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    b: &'a B,
}

impl<'a, B: Builder> Parser<'a, B> {
    pub(crate) fn parse(src: &str, b: &'a B) -> Result<B::Out, ScalarError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0, b };
        let v = p.expr()?;
        match p.peek() {
            Tok::End => Ok(v),
            t => Err(ScalarError::parse(p.col(), format!("unexpected token {t:?}"))),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ScalarError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(ScalarError::parse(self.col(), format!("expected {t:?}, found {:?}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<B::Out, ScalarError> {
        let mut neg = false;
        match self.peek() {
            Tok::Plus => {
                self.next();
            }
            Tok::Minus => {
                self.next();
                neg = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = self.b.neg(&acc);
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = self.b.add(&acc, &t);
                }
                Tok::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = self.b.add(&acc, &self.b.neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<B::Out, ScalarError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    let f = self.power()?;
                    acc = self.b.mul(&acc, &f);
                }
                Tok::Caret if self.b.caret_product() => {
                    self.next();
                    let f = self.power()?;
                    acc = self.b.mul(&acc, &f);
                }
                Tok::Slash => {
                    self.next();
                    let col = self.col();
                    let f = self.power()?;
                    let c = self
                        .b
                        .as_constant(&f)
                        .and_then(|c| c.inv())
                        .ok_or_else(|| ScalarError::parse(col, "division by a non-constant or zero"))?;
                    acc = self.b.mul(&acc, &self.b.constant(c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<B::Out, ScalarError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            if let Tok::Int(k) = &self.toks[self.pos + 1].0 {
                let col = self.toks[self.pos + 1].1;
                let k: u32 = k.try_into().map_err(|_| ScalarError::parse(col, "exponent too large"))?;
                self.next();
                self.next();
                let mut r = self.b.constant(GaussRational::one());
                for _ in 0..k {
                    r = self.b.mul(&r, &base);
                }
                return Ok(r);
            }
            if !self.b.caret_product() {
                let col = self.toks[self.pos + 1].1;
                return Err(ScalarError::parse(col, "expected integer exponent after '^'"));
            }
        }
        Ok(base)
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ScalarError> {
        let mut v = Vec::new();
        loop {
            let neg = if *self.peek() == Tok::Minus {
                self.next();
                true
            } else {
                false
            };
            let col = self.col();
            match self.next() {
                Tok::Int(k) => {
                    let k: i64 = (&k).try_into().map_err(|_| ScalarError::parse(col, "mode too large"))?;
                    v.push(if neg { -k } else { k });
                }
                t => return Err(ScalarError::parse(col, format!("expected integer, found {t:?}"))),
            }
            match self.peek() {
                Tok::Comma => {
                    self.next();
                }
                Tok::RBracket => {
                    self.next();
                    return Ok(v);
                }
                t => return Err(ScalarError::parse(self.col(), format!("expected ',' or ']', found {t:?}"))),
            }
        }
    }

    fn atom(&mut self) -> Result<B::Out, ScalarError> {
        let col = self.col();
        match self.next() {
            Tok::Int(k) => Ok(self.b.constant(GaussRational::real(num::BigRational::from_integer(k)))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Name(n) => {
                if n == "i" {
                    return Ok(self.b.constant(GaussRational::i()));
                }
                if n == "E" && *self.peek() == Tok::LBracket {
                    self.next();
                    let m = self.int_list()?;
                    return self.b.mode(m).map_err(|e| ScalarError::parse(col, e));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return self.b.call(&n, &arg).map_err(|e| ScalarError::parse(col, e));
                }
                self.b
                    .name(&n)
                    .ok_or_else(|| ScalarError::parse(col, format!("unknown name '{n}'")))
            }
            t => Err(ScalarError::parse(col, format!("unexpected token {t:?}"))),
        }
    }
}
