use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GeneratorKind, Tower, TowerExpr};
use crate::parse::{parse_expr, EvalContext, Expr};
use crate::ratfield::RatFunc;
use crate::{Error, Rational};

/// Evaluates expressions over a tower: `x`, generator names, and the
/// aliases `log(u)`, `exp(u)`, `x^(p/q)` for generators already present.
pub struct TowerContext<'a> {
    tower: &'a Arc<Tower>,
}

impl<'a> TowerContext<'a> {
    pub fn new(tower: &'a Arc<Tower>) -> Self {
        TowerContext { tower }
    }

    fn find(&self, want: impl Fn(&GeneratorKind) -> bool) -> Option<usize> {
        self.tower.generators().iter().position(|g| want(g.kind()))
    }
}

fn perr(msg: String) -> Error {
    Error::Parse { pos: 0, msg }
}

impl EvalContext for TowerContext<'_> {
    type Value = TowerExpr;

    fn constant(&self, q: Rational) -> TowerExpr {
        TowerExpr::constant(q)
    }

    fn variable(&self, name: &str) -> Result<TowerExpr, Error> {
        if name == "x" {
            return Ok(TowerExpr::base(RatFunc::x()));
        }
        self.tower.gen(name).map_err(|_| perr(format!("unknown variable {name:?}")))
    }

    fn call(&self, name: &str, arg: &Expr) -> Result<TowerExpr, Error> {
        let u = self.eval(arg)?;
        let i = match name {
            "log" => self.find(|k| matches!(k, GeneratorKind::Log(v) if *v == u)),
            "exp" => self.find(|k| matches!(k, GeneratorKind::Exp(v) if *v == u)),
            _ => return Err(perr(format!("unknown function {name:?}"))),
        };
        i.map(|i| self.tower.gen_at(i))
            .ok_or_else(|| perr(format!("the tower has no generator {name}({u})")))
    }

    fn add(&self, a: TowerExpr, b: TowerExpr) -> Result<TowerExpr, Error> {
        a.try_add(&b)
    }

    fn sub(&self, a: TowerExpr, b: TowerExpr) -> Result<TowerExpr, Error> {
        a.try_sub(&b)
    }

    fn mul(&self, a: TowerExpr, b: TowerExpr) -> Result<TowerExpr, Error> {
        a.try_mul(&b)
    }

    fn div(&self, a: TowerExpr, b: TowerExpr) -> Result<TowerExpr, Error> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        a.try_div(&b)
    }

    fn neg(&self, a: TowerExpr) -> Result<TowerExpr, Error> {
        Ok(-a)
    }

    fn pow(&self, base: TowerExpr, base_expr: &Expr, e: &Rational) -> Result<TowerExpr, Error> {
        let exp_i64 = |q: &Rational| -> Result<i64, Error> {
            q.to_integer().try_into().map_err(|_| perr("exponent too large".into()))
        };
        if e.is_integer() {
            if base.is_zero() && e < &Rational::zero() {
                return Err(Error::DivisionByZero);
            }
            return base.pow(exp_i64(e)?);
        }
        // x^(p/q) through the radical generator
        let is_x = matches!(base_expr, Expr::Var(v) if v == "x");
        let Some((r, n)) = self.tower.radical().filter(|_| is_x) else {
            return Err(perr(format!("fractional exponent {e} needs a radical generator over x")));
        };
        let scaled = e * Rational::from_integer(n.into());
        if !scaled.is_integer() {
            return Err(perr(format!("exponent {e} is not a multiple of 1/{n}")));
        }
        self.tower.gen_at(r).pow(exp_i64(&scaled)?)
    }
}

/// Parses a generator definition `log(u)`, `exp(u)`, `x^(1/n)` or `int(g)`
/// whose arguments live in `tower`.
pub fn parse_generator(tower: &Arc<Tower>, def: &str) -> Result<GeneratorKind, Error> {
    let e = parse_expr(def)?;
    let ctx = TowerContext::new(tower);
    match &e {
        Expr::Call(f, arg) => {
            let u = ctx.eval(arg)?;
            match f.as_str() {
                "log" => Ok(GeneratorKind::Log(u)),
                "exp" => Ok(GeneratorKind::Exp(u)),
                "int" => Ok(GeneratorKind::FormalIntegral(u)),
                _ => Err(Error::BadTower(format!("unknown generator kind {f:?}"))),
            }
        }
        Expr::Pow(b, q) if matches!(b.as_ref(), Expr::Var(v) if v == "x") && q.numer().is_one() => {
            let n: u32 = q.denom().try_into().map_err(|_| Error::BadTower("root too large".into()))?;
            Ok(GeneratorKind::Radical(n))
        }
        _ => Err(Error::BadTower(format!("{def:?} is not log(u), exp(u), x^(1/n) or int(g)"))),
    }
}

impl Tower {
    /// Builds a tower from `(name, definition)` pairs in order.
    pub fn from_defs<S: AsRef<str>>(defs: &[(S, S)]) -> Result<Arc<Tower>, Error> {
        let mut t = Tower::base();
        for (name, def) in defs {
            let kind = parse_generator(&t, def.as_ref())?;
            t = t.extend(name.as_ref(), kind)?;
        }
        Ok(t)
    }
}
