use std::fmt;

use super::{holo_weights, CRational, Poly, Truncation};
use crate::error::{Error, Result};

/// A holomorphic polynomial in `z₁..zₙ, w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloPoly {
    n: usize,
    poly: Poly,
}

impl HoloPoly {
    pub fn zero(n: usize) -> Self {
        HoloPoly { n, poly: Poly::zero(holo_weights(n)) }
    }

    pub fn constant(n: usize, c: CRational) -> Self {
        HoloPoly { n, poly: Poly::constant(holo_weights(n), c) }
    }

    pub fn z(n: usize, j: usize) -> Self {
        HoloPoly { n, poly: Poly::var(holo_weights(n), j) }
    }

    pub fn w(n: usize) -> Self {
        HoloPoly { n, poly: Poly::var(holo_weights(n), n) }
    }

    /// `c · z^alpha · w^m`
    pub fn monomial(alpha: &[u16], m: u16, c: CRational) -> Self {
        let n = alpha.len();
        let mut e = alpha.to_vec();
        e.push(m);
        let mut p = HoloPoly::zero(n);
        p.poly.add_term(e, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u16>, u16, CRational)>) -> Result<Self> {
        let mut p = HoloPoly::zero(n);
        for (alpha, m, c) in terms {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: alpha.len() });
            }
            let mut e = alpha;
            e.push(m);
            p.poly.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn from_poly(n: usize, poly: Poly) -> Self {
        debug_assert_eq!(poly.nvars(), n + 1);
        HoloPoly { n, poly }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, alpha: &[u16], m: u16) -> CRational {
        let mut e = alpha.to_vec();
        e.push(m);
        self.poly.coeff(&e)
    }

    /// `(alpha, m, coeff)` triples in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u16>, u16, CRational)> + '_ {
        let n = self.n;
        self.poly.terms().iter().map(move |(e, c)| (e[..n].to_vec(), e[n], c.clone()))
    }

    pub fn add(&self, o: &HoloPoly) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &HoloPoly) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.sub(&o.poly) }
    }

    pub fn add_assign(&mut self, o: &HoloPoly) {
        self.poly.add_assign(&o.poly);
    }

    pub fn scale(&self, k: &CRational) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.scale(k) }
    }

    pub fn mul(&self, o: &HoloPoly, t: Option<&Truncation>) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.mul(&o.poly, t) }
    }

    pub fn truncate(&self, t: &Truncation) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.truncate(t) }
    }

    pub fn weighted_component(&self, d: u32) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.filter(|e| self.poly.weight_of(e) == d) }
    }

    /// Lowest weight carried by a nonzero term.
    pub fn min_weight(&self) -> Option<u32> {
        self.poly.terms().keys().map(|e| self.poly.weight_of(e)).min()
    }

    pub fn derivative_z(&self, j: usize) -> HoloPoly {
        HoloPoly { n: self.n, poly: self.poly.derivative(j) }
    }

    /// Substitutes `z_j ↦ zs[j]`, `w ↦ w_img`.
    pub fn compose(&self, zs: &[HoloPoly], w_img: &HoloPoly, t: Option<&Truncation>) -> HoloPoly {
        let mut images: Vec<Poly> = zs.iter().map(|p| p.poly.clone()).collect();
        images.push(w_img.poly.clone());
        let out_n = w_img.n;
        HoloPoly { n: out_n, poly: self.poly.substitute(&images, &holo_weights(out_n), t) }
    }

    /// Substitutes into an arbitrary target layout.
    pub(crate) fn substitute_raw(&self, images: &[Poly], t: Option<&Truncation>) -> Poly {
        let ws = images[0].weights().clone();
        self.poly.substitute(images, &ws, t)
    }
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    write!(f, "·z{}^{}", j + 1, a)?;
                }
            }
            if m > 0 {
                write!(f, "·w^{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_with_shift() {
        // (z1 + w)² with w -> w + z1²
        let n = 1;
        let p = HoloPoly::z(n, 0).add(&HoloPoly::w(n));
        let sq = p.mul(&p, None);
        let w_img = HoloPoly::w(n).add(&HoloPoly::monomial(&[2], 0, CRational::one()));
        let got = sq.compose(&[HoloPoly::z(n, 0)], &w_img, Some(&Truncation::weighted(4)));
        // (z + w + z²)² to weight 4: z² + 2z³ + 2zw + z⁴ + 2wz² + w²
        assert_eq!(got.coeff(&[2], 0), CRational::one());
        assert_eq!(got.coeff(&[3], 0), CRational::from_int(2));
        assert_eq!(got.coeff(&[4], 0), CRational::one());
        assert_eq!(got.coeff(&[2], 1), CRational::from_int(2));
        assert_eq!(got.coeff(&[0], 2), CRational::one());
        assert!(got.coeff(&[5], 0).is_zero());
    }
}
