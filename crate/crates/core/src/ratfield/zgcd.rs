//! Greatest common divisors in `Q[x]` computed in `Z[x]`. Euclid over `Q`
//! lets the coefficients of the remainders grow wildly; here a gcd modulo a
//! couple of primes settles the common coprime case, and the rest goes
//! through a primitive remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Poly;
use crate::Rational;

const PRIMES: [u64; 2] = [4_294_967_291, 4_294_967_279];

/// Monic gcd; `gcd(0, 0) = 0`.
pub(crate) fn gcd(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.deg() == 0 || b.deg() == 0 {
        return Poly::one();
    }
    let (mut p, mut q) = (primitive(a.coeffs()), primitive(b.coeffs()));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    // modulo a prime that keeps both degrees, gcd degree 0 means coprime
    if PRIMES.iter().any(|&m| degree_mod(&p, &q, m) == Some(0)) {
        return Poly::one();
    }
    loop {
        let r = pseudo_rem(&p, &q);
        match r.len() {
            0 => break,
            1 => return Poly::one(),
            _ => {
                p = q;
                q = primitive_part(r);
            }
        }
    }
    Poly::new(q.into_iter().map(Rational::from_integer).collect()).monic()
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive_part(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let c = content(&p);
    if !c.is_zero() && !c.is_one() {
        for x in &mut p {
            *x /= &c;
        }
    }
    p
}

/// The primitive integer polynomial proportional to `p`.
fn primitive(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive_part(p.iter().map(|c| c.numer() * (&l / c.denom())).collect())
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// A multiple of `p` reduced below the degree of `q`; needs `deg p >= deg q`.
fn pseudo_rem(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let dq = q.len() - 1;
    let lq = &q[dq];
    let mut r = p.to_vec();
    while r.len() > dq {
        let k = r.len() - 1 - dq;
        let lr = r.last().expect("nonempty").clone();
        let g = lr.gcd(lq);
        let (sr, sq) = (lq / &g, lr / &g);
        for x in r.iter_mut() {
            *x *= &sr;
        }
        for (j, c) in q.iter().enumerate() {
            r[k + j] -= &sq * c;
        }
        trim(&mut r);
    }
    r
}

fn reduce(p: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    p.iter().map(|c| c.mod_floor(&mb).to_u64().expect("reduced below m")).collect()
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a as u128, m - 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Degree of the gcd modulo `m`, or `None` if `m` divides a leading coefficient.
fn degree_mod(p: &[BigInt], q: &[BigInt], m: u64) -> Option<usize> {
    let (mut a, mut b) = (reduce(p, m), reduce(q, m));
    if a.last() == Some(&0) || b.last() == Some(&0) {
        return None;
    }
    let mm = m as u128;
    while !b.is_empty() {
        let inv = inv_mod(*b.last().expect("nonempty"), m) as u128;
        while a.len() >= b.len() {
            let c = *a.last().expect("nonempty") as u128 * inv % mm;
            let k = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[k + j] = ((a[k + j] as u128 + mm - c * bj as u128 % mm) % mm) as u64;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    Some(a.len() - 1)
}
