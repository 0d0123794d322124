use std::cmp::Ordering;
use std::ops::Mul;

/// Exponent vector with trailing zeros trimmed, so the same monomial has one
/// representation regardless of how many variables are in play.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `v_i^e`
    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Self::new(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Self::new(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| {
            Self::new(self.0.iter().enumerate().map(|(i, a)| a - other.exp(i)).collect())
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i).max(other.exp(i))).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Self::new((0..n).map(|i| self.exp(i).min(other.exp(i))).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Monomial {
        let mut out = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                let j = f(i);
                if out.len() <= j {
                    out.resize(j + 1, 0);
                }
                out[j] += e;
            }
        }
        Self::new(out)
    }

    pub fn fmt_with(&self, name: impl Fn(usize) -> String) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, &e)| if e == 1 { name(i) } else { format!("{}^{e}", name(i)) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        let n = self.0.len().max(rhs.0.len());
        Monomial((0..n).map(|i| self.exp(i) + rhs.exp(i)).collect())
    }
}

/// Term orders. Variable 0 is the largest variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    DegRevLex,
    /// Degrevlex on variables `0..first`, ties broken by degrevlex on the
    /// rest. Eliminates the first block.
    Block { first: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => {
                let n = a.len().max(b.len());
                (0..n).map(|i| a.exp(i).cmp(&b.exp(i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            }
            MonomialOrder::DegRevLex => degrevlex(a, b, 0, a.len().max(b.len())),
            MonomialOrder::Block { first } => degrevlex(a, b, 0, first)
                .then_with(|| degrevlex(a, b, first, a.len().max(b.len()).max(first))),
        }
    }
}

fn degrevlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = (lo..hi).map(|i| a.exp(i)).sum();
    let db: u32 = (lo..hi).map(|i| b.exp(i)).sum();
    da.cmp(&db).then_with(|| {
        (lo..hi)
            .rev()
            .map(|i| b.exp(i).cmp(&a.exp(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}
