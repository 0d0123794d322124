use num_traits::Zero;

use super::{MPoly, MRat};
use crate::field::DifferentialField;

/// A derivation of `K[v0, v1, ...]` (and its fraction field) that extends the
/// derivation of `K` by prescribing the image of each variable.
///
/// Variables without a prescribed image are constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<K> {
    images: Vec<MRat<K>>,
    polynomial: bool,
}

impl<K: DifferentialField> Default for Derivation<K> {
    fn default() -> Self {
        Derivation::new(Vec::new())
    }
}

impl<K: DifferentialField> Derivation<K> {
    pub fn new(images: Vec<MRat<K>>) -> Self {
        let polynomial = images.iter().all(MRat::is_polynomial);
        Derivation { images, polynomial }
    }

    pub fn polynomial(images: Vec<MPoly<K>>) -> Self {
        Derivation { images: images.into_iter().map(MRat::from_poly).collect(), polynomial: true }
    }

    pub fn image(&self, i: usize) -> MRat<K> {
        self.images.get(i).cloned().unwrap_or_else(MRat::zero)
    }

    pub fn images(&self) -> &[MRat<K>] {
        &self.images
    }

    /// Adds one more variable with the given image.
    pub fn push(&mut self, image: MRat<K>) {
        self.polynomial &= image.is_polynomial();
        self.images.push(image);
    }

    /// True when every image is a polynomial, so polynomials map to polynomials.
    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// The derivative of a polynomial; `p' = sum c' m + sum_i (dp/dv_i) v_i'`.
    pub fn derive_mpoly(&self, p: &MPoly<K>) -> MRat<K> {
        let coeff_part = MPoly::from_terms(p.terms().map(|(m, c)| (m.clone(), c.derive())));
        if self.polynomial {
            return MRat::from_poly(self.derive_poly_part(p, coeff_part));
        }
        let mut acc = MRat::from_poly(coeff_part);
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() || !p.uses_var(i) {
                continue;
            }
            acc = &acc + &(&MRat::from_poly(p.partial(i)) * img);
        }
        acc
    }

    /// [`Derivation::derive_mpoly`] for derivations with polynomial images.
    ///
    /// Panics if some image is a proper fraction.
    pub fn derive_poly(&self, p: &MPoly<K>) -> MPoly<K> {
        assert!(self.polynomial, "derivation has non-polynomial images");
        let coeff_part = MPoly::from_terms(p.terms().map(|(m, c)| (m.clone(), c.derive())));
        self.derive_poly_part(p, coeff_part)
    }

    fn derive_poly_part(&self, p: &MPoly<K>, mut acc: MPoly<K>) -> MPoly<K> {
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() || !p.uses_var(i) {
                continue;
            }
            acc = &acc + &(&p.partial(i) * img.num());
        }
        acc
    }

    /// Quotient rule on fractions.
    pub fn derive(&self, f: &MRat<K>) -> MRat<K> {
        let dn = self.derive_mpoly(f.num());
        if f.is_polynomial() {
            return dn;
        }
        let dd = self.derive_mpoly(f.den());
        let num = &(&dn * &MRat::from_poly(f.den().clone())) - &(&MRat::from_poly(f.num().clone()) * &dd);
        let den = MRat::from_poly(f.den() * f.den());
        &num / &den
    }

    pub fn derive_n(&self, f: &MRat<K>, n: usize) -> MRat<K> {
        let mut out = f.clone();
        for _ in 0..n {
            out = self.derive(&out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarSet;
    use crate::ratfield::rf;
    use crate::{MPolyF, RatFunc};

    /// `Z' = A Z` for the 3x3 matrix with first row `(0, 1/x, 1/(x-1))`.
    fn example_derivation() -> (VarSet, Derivation<RatFunc>) {
        let vs = VarSet::coordinates(3);
        let d = Derivation::polynomial(vec![
            MPoly::constant(rf("1/x")),
            vs.parse("1/x*Z_2_3 + 1/(x - 1)").unwrap(),
            MPoly::zero(),
        ]);
        (vs, d)
    }

    #[test]
    fn coordinate_images() {
        let (vs, d) = example_derivation();
        let p = |s: &str| -> MPolyF { vs.parse(s).unwrap() };
        assert_eq!(d.derive_poly(&p("Z_1_2")), p("1/x"));
        assert!(d.derive_poly(&p("Z_2_3")).is_zero());
        // Leibniz with x' = 1
        assert_eq!(d.derive_poly(&p("x*Z_1_3")), p("Z_1_3 + Z_2_3 + x/(x - 1)"));
    }

    #[test]
    fn quotient_rule() {
        let (vs, d) = example_derivation();
        let p = |s: &str| -> MPolyF { vs.parse(s).unwrap() };
        let f = MRat::new(p("1"), p("Z_1_2")).unwrap();
        let expect = MRat::new(p("-1/x"), p("Z_1_2^2")).unwrap();
        assert_eq!(d.derive(&f), expect);
        assert_eq!(d.derive(&MRat::from_poly(p("Z_1_2"))), MRat::from_poly(p("1/x")));
    }

    #[test]
    fn rational_images() {
        // v0 = log(x): v0' = 1/x; v1 with v1' = 1/v0
        let vs = VarSet::new(vec!["L".into(), "M".into()]).unwrap();
        let p = |s: &str| -> MPolyF { vs.parse(s).unwrap() };
        let d = Derivation::new(vec![MRat::from_poly(p("1/x")), MRat::new(p("1"), p("L")).unwrap()]);
        assert!(!d.is_polynomial());
        let got = d.derive_mpoly(&p("L*M"));
        assert_eq!(got, MRat::from_poly(p("1/x*M + 1")));
    }
}
