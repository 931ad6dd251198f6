//! Small recursive-descent parser for ring expressions such as
//! `(x^2+1)/(x*f1^2)` or `x1*x2^-1 + 2`.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//! Division and negative powers are only defined for units of the target ring.

use crate::error::{Error, Result};
use crate::ring::laurent::MultiLaurent;
use crate::ring::local::{LocalRing, SFraction};
use crate::ring::multilocal::{MultiLocalRing, MultiSFraction};
use crate::ring::poly::DensePoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Int(i64),
    Var(String),
    Neg(Box<RingExpr>),
    Add(Box<RingExpr>, Box<RingExpr>),
    Sub(Box<RingExpr>, Box<RingExpr>),
    Mul(Box<RingExpr>, Box<RingExpr>),
    Div(Box<RingExpr>, Box<RingExpr>),
    Pow(Box<RingExpr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| Error::Parse(format!("integer out of range: {text}")))?;
            out.push(Tok::Int(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = RingExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = RingExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<RingExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = RingExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = RingExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<RingExpr> {
        if self.eat('-') {
            return Ok(RingExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<RingExpr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(k)) => {
                    self.pos += 1;
                    Ok(RingExpr::Pow(Box::new(base), if neg { -k } else { k }))
                }
                other => Err(Error::Parse(format!("expected integer exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RingExpr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(RingExpr::Int(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(RingExpr::Var(name))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<RingExpr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty ring expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input in {s:?} at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(e)
}

/// A ring that expression trees can be evaluated in.
pub trait ExprRing {
    type Elem: Clone;
    fn int(&self, v: i64) -> Self::Elem;
    fn var(&self, name: &str) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

pub fn eval<R: ExprRing>(ring: &R, e: &RingExpr) -> Result<R::Elem> {
    Ok(match e {
        RingExpr::Int(v) => ring.int(*v),
        RingExpr::Var(name) => ring.var(name)?,
        RingExpr::Neg(a) => ring.neg(&eval(ring, a)?),
        RingExpr::Add(a, b) => ring.add(&eval(ring, a)?, &eval(ring, b)?),
        RingExpr::Sub(a, b) => ring.sub(&eval(ring, a)?, &eval(ring, b)?),
        RingExpr::Mul(a, b) => ring.mul(&eval(ring, a)?, &eval(ring, b)?),
        RingExpr::Div(a, b) => ring.mul(&eval(ring, a)?, &ring.inverse(&eval(ring, b)?)?),
        RingExpr::Pow(a, k) => {
            let mut base = eval(ring, a)?;
            if *k < 0 {
                base = ring.inverse(&base)?;
            }
            let mut acc = ring.int(1);
            for _ in 0..k.unsigned_abs() {
                acc = ring.mul(&acc, &base);
            }
            acc
        }
    })
}

pub fn parse_eval<R: ExprRing>(ring: &R, s: &str) -> Result<R::Elem> {
    eval(ring, &parse(s)?)
}

impl ExprRing for LocalRing {
    type Elem = SFraction;

    fn int(&self, v: i64) -> SFraction {
        self.constant(v)
    }

    fn var(&self, name: &str) -> Result<SFraction> {
        if name == "x" || name == "f0" {
            return Ok(self.from_poly(DensePoly::x(self.field())));
        }
        if let Some(i) = name.strip_prefix('f').and_then(|s| s.parse::<usize>().ok()) {
            if i < self.rank() {
                return Ok(self.from_poly(self.basis()[i].clone()));
            }
        }
        Err(Error::Parse(format!("unknown ring variable {name:?}")))
    }

    fn add(&self, a: &SFraction, b: &SFraction) -> SFraction {
        LocalRing::add(self, a, b)
    }

    fn sub(&self, a: &SFraction, b: &SFraction) -> SFraction {
        LocalRing::sub(self, a, b)
    }

    fn mul(&self, a: &SFraction, b: &SFraction) -> SFraction {
        LocalRing::mul(self, a, b)
    }

    fn neg(&self, a: &SFraction) -> SFraction {
        LocalRing::neg(self, a)
    }

    fn inverse(&self, a: &SFraction) -> Result<SFraction> {
        self.try_inverse(a).ok_or_else(|| Error::NotInvertible(self.display(a)))
    }
}

impl ExprRing for MultiLocalRing {
    type Elem = MultiSFraction;

    fn int(&self, v: i64) -> MultiSFraction {
        self.constant(v)
    }

    fn var(&self, name: &str) -> Result<MultiSFraction> {
        let idx = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&i| i >= 1 && i <= self.nvars())
                .map(|i| i - 1)
        };
        if let Some(i) = name.strip_prefix('x').and_then(idx) {
            return Ok(self.from_laurent(MultiLaurent::var(self.field(), self.nvars(), i)));
        }
        if let Some(i) = name.strip_prefix('g').and_then(idx) {
            return Ok(self.from_laurent(self.s(i)?));
        }
        Err(Error::Parse(format!("unknown ring variable {name:?}")))
    }

    fn add(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        MultiLocalRing::add(self, a, b)
    }

    fn sub(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        MultiLocalRing::sub(self, a, b)
    }

    fn mul(&self, a: &MultiSFraction, b: &MultiSFraction) -> MultiSFraction {
        MultiLocalRing::mul(self, a, b)
    }

    fn neg(&self, a: &MultiSFraction) -> MultiSFraction {
        MultiLocalRing::neg(self, a)
    }

    /// Units are c·x^e·∏ s_i^{k_i}.
    fn inverse(&self, a: &MultiSFraction) -> Result<MultiSFraction> {
        let not_unit = || Error::NotInvertible(self.display(a));
        if a.is_zero() {
            return Err(not_unit());
        }
        let mut num = self.from_laurent(a.num().clone());
        let mut k: Vec<i64> = a.den_exps().iter().map(|&e| e as i64).collect();
        if self.is_localized() {
            for (i, ki) in k.iter_mut().enumerate() {
                while let Ok(q) = self.divide_exact_s(&num, i, 1) {
                    num = q;
                    *ki -= 1;
                }
            }
        }
        if num.num().terms().len() != 1 {
            return Err(not_unit());
        }
        let (e, &c) = num.num().terms().iter().next().expect("one term");
        let cinv = self.field().inv(c).ok_or_else(not_unit)?;
        let neg_e: Vec<i64> = e.iter().map(|v| -v).collect();
        let mono = self.from_laurent(MultiLaurent::monomial(self.field(), neg_e, cinv as i64));
        Ok(self.mul_s_powers(&mono, &k))
    }
}
