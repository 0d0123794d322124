//! Text grammar for exact expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)?
//! exponent := INT | '(' '-'? INT ('/' INT)? ')'
//! atom     := INT | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! Parsing produces an [`Expr`] tree; an [`EvalContext`] gives it meaning
//! in a particular algebra (rational functions, polynomial rings, towers,
//! operators).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::Field;
use crate::ratfield::RatFunc;
use crate::{Error, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Call(String, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
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
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn int(&mut self) -> Result<BigInt, Error> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn exponent(&mut self) -> Result<Rational, Error> {
        if !self.eat('(') {
            return Ok(Rational::from_integer(self.int()?));
        }
        let neg = self.eat('-');
        let num = self.int()?;
        let den = if self.eat('/') { self.int()? } else { BigInt::one() };
        if den.is_zero() {
            return self.err("zero denominator in exponent");
        }
        self.expect(')')?;
        let e = Rational::new(num, den);
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(name, Box::new(arg)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, Error> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, len: src.chars().count() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Gives meaning to the leaves and operators of an [`Expr`].
pub trait EvalContext {
    type Value: Clone;

    fn constant(&self, q: Rational) -> Self::Value;
    fn variable(&self, name: &str) -> Result<Self::Value, Error>;
    fn call(&self, name: &str, _arg: &Expr) -> Result<Self::Value, Error> {
        Err(Error::Parse { pos: 0, msg: format!("unknown function {name:?}") })
    }
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, Error>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value, Error> {
        self.sub(self.constant(Rational::zero()), a)
    }

    /// Integer powers by repeated multiplication; negative ones invert first.
    fn pow(&self, base: Self::Value, base_expr: &Expr, e: &Rational) -> Result<Self::Value, Error> {
        let _ = base_expr;
        if !e.is_integer() {
            return Err(Error::Parse { pos: 0, msg: format!("fractional exponent {e} not allowed here") });
        }
        let n = e.to_integer();
        let (neg, mag) = (n < BigInt::zero(), num_traits::Signed::abs(&n));
        let mag: u32 = mag
            .try_into()
            .map_err(|_| Error::Parse { pos: 0, msg: "exponent too large".into() })?;
        let mut acc = self.constant(Rational::one());
        for _ in 0..mag {
            acc = self.mul(acc, base.clone())?;
        }
        if neg {
            acc = self.div(self.constant(Rational::one()), acc)?;
        }
        Ok(acc)
    }

    fn eval(&self, e: &Expr) -> Result<Self::Value, Error> {
        match e {
            Expr::Int(n) => Ok(self.constant(Rational::from_integer(n.clone()))),
            Expr::Var(v) => self.variable(v),
            Expr::Call(f, arg) => self.call(f, arg),
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                self.neg(a)
            }
            Expr::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.add(a, b)
            }
            Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.sub(a, b)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.mul(a, b)
            }
            Expr::Div(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.div(a, b)
            }
            Expr::Pow(b, e) => {
                let base = self.eval(b)?;
                self.pow(base, b, e)
            }
        }
    }

    fn parse(&self, src: &str) -> Result<Self::Value, Error> {
        self.eval(&parse_expr(src)?)
    }
}

/// Evaluates into `Q(x)`; the only variable is `x`.
pub struct RatFuncContext;

impl EvalContext for RatFuncContext {
    type Value = RatFunc;

    fn constant(&self, q: Rational) -> RatFunc {
        RatFunc::constant(q)
    }

    fn variable(&self, name: &str) -> Result<RatFunc, Error> {
        match name {
            "x" => Ok(RatFunc::x()),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown variable {name:?}") }),
        }
    }

    fn add(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, Error> {
        Ok(a + b)
    }

    fn sub(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, Error> {
        Ok(a - b)
    }

    fn mul(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, Error> {
        Ok(a * b)
    }

    fn div(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, Error> {
        Ok(a * b.recip()?)
    }

    fn neg(&self, a: RatFunc) -> Result<RatFunc, Error> {
        Ok(-a)
    }
}

pub fn parse_ratfunc(src: &str) -> Result<RatFunc, Error> {
    RatFuncContext.parse(src)
}

/// Parses a rational literal such as `-7/2`.
pub fn parse_rational(src: &str) -> Result<Rational, Error> {
    let f = parse_ratfunc(src)?;
    f.to_rational().ok_or_else(|| Error::Parse { pos: 0, msg: format!("{src:?} is not a constant") })
}
