//! Integration of rational functions: Hermite reduction and the rational
//! part of the logarithmic remainder.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{RatFunc, UPoly};
use crate::{Error, Rational};

/// Splits `g = h' + r` where `r = p/q` is proper with `q` squarefree.
///
/// The polynomial part of `g` is integrated into `h`, so `r = 0` exactly
/// when `g` has an antiderivative in `Q(x)`.
pub fn hermite_reduce(g: &RatFunc) -> (RatFunc, RatFunc) {
    let (poly, proper) = g.split_polynomial();
    let mut h = RatFunc::from_poly(poly.integral());
    if proper.is_zero() {
        return (h, RatFunc::zero());
    }
    let mut a = proper.num().clone();
    let d = proper.den().clone();
    let mut dm = d.gcd(&d.derivative());
    let ds = d.div_exact(&dm).expect("gcd divides");
    while !dm.is_constant() {
        let dm2 = dm.gcd(&dm.derivative());
        let dms = dm.div_exact(&dm2).expect("gcd divides");
        let coef = -(&ds * &dm.derivative()).div_exact(&dm).expect("dm | ds*dm'");
        let (b, c) = UPoly::diophantine(&coef, &dms, &a).expect("coprime by construction");
        let ds_over = ds.div_exact(&dms).expect("dms | ds");
        a = &c - &(&b.derivative() * &ds_over);
        h = &h + &RatFunc::new(b, dm.clone()).expect("nonzero denominator");
        dm = dm2;
    }
    let rem = RatFunc::new(a, ds).expect("nonzero denominator");
    let (p2, r) = rem.split_polynomial();
    h = &h + &RatFunc::from_poly(p2.integral());
    (h, r)
}

/// The nonzero squarefree proper remainder left by Hermite reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePoleObstruction {
    pub remainder: RatFunc,
}

/// Result of asking for an antiderivative inside `Q(x)`.
pub type Antiderivative = Result<RatFunc, SimplePoleObstruction>;

pub fn antiderivative_in_field(g: &RatFunc) -> Antiderivative {
    let (h, r) = hermite_reduce(g);
    if r.is_zero() {
        Ok(h)
    } else {
        Err(SimplePoleObstruction { remainder: r })
    }
}

/// `coefficient * log(argument)` with `argument` monic squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub coefficient: Rational,
    pub argument: UPoly,
}

/// Writes a proper `p/q` with squarefree `q` as `sum c_i * v_i'/v_i`.
///
/// The residues `c_i` are the roots of `res_x(q, p - t*q')`; when all of them
/// are rational, `v_i = gcd(q, p - c_i*q')` splits `q` without factoring it.
/// Returns `NotSupported` when some residue is irrational (it would need
/// algebraic constants).
pub fn rational_log_part(r: &RatFunc) -> Result<Vec<LogTerm>, Error> {
    if r.is_zero() {
        return Ok(Vec::new());
    }
    let (p, q) = (r.num(), r.den());
    if !r.split_polynomial().0.is_zero() {
        return Err(Error::NotSupported("log part needs a proper rational function".into()));
    }
    if q.gcd(&q.derivative()).deg() > 0 {
        return Err(Error::NotSupported("log part needs a squarefree denominator".into()));
    }
    let dq = q.derivative();
    let n = q.deg();
    // R(t) has degree <= deg q: interpolate from deg q + 1 evaluations.
    let points: Vec<(Rational, Rational)> = (0..=n as i64)
        .map(|k| {
            let t = Rational::from_integer(BigInt::from(k));
            let rhs = p - &dq.scale(&t);
            (t, q.resultant(&rhs))
        })
        .collect();
    let res = interpolate(&points);
    let roots = rational_roots(&res)?;
    let mut terms = Vec::new();
    let mut total = 0;
    for c in roots {
        let v = q.gcd(&(p - &dq.scale(&c)));
        if v.deg() > 0 {
            total += v.deg();
            terms.push(LogTerm { coefficient: c, argument: v });
        }
    }
    if total != n {
        return Err(Error::NotSupported(format!(
            "residues of {r} are not all rational; the logarithmic part needs algebraic constants"
        )));
    }
    Ok(terms)
}

/// Lagrange interpolation over Q.
fn interpolate(points: &[(Rational, Rational)]) -> UPoly {
    let mut acc = UPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UPoly::one();
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &UPoly::new(vec![-xj.clone(), Rational::one()]);
                denom *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}

const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

/// All distinct rational roots, by the rational root theorem.
fn rational_roots(f: &UPoly) -> Result<Vec<Rational>, Error> {
    if f.is_zero() {
        return Err(Error::NotSupported("degenerate residue resultant".into()));
    }
    let f = f.squarefree_kernel();
    // clear denominators
    let lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return Err(Error::NotSupported("residue resultant coefficients too large".into()));
    };
    if a0 > DIVISOR_SEARCH_LIMIT || an > DIVISOR_SEARCH_LIMIT {
        return Err(Error::NotSupported("residue resultant coefficients too large".into()));
    }
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let c = Rational::new(BigInt::from(num) * sign, BigInt::from(den));
                if f.eval(&c).is_zero() && !roots.contains(&c) {
                    roots.push(c);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
