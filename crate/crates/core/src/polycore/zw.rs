use super::{pair_weights, real_weights, CRational, Poly, RealPoly, Truncation};
use crate::error::{Error, Result};
use crate::hermitian::Signature;

/// A polynomial in `z, z̄, w, w̄`, typically a defining function of a
/// hypersurface through the origin written in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZwPoly {
    n: usize,
    poly: Poly,
}

impl ZwPoly {
    pub fn zero(n: usize) -> Self {
        ZwPoly { n, poly: Poly::zero(pair_weights(n)) }
    }

    /// Adds `c · z^alpha z̄^beta w^m w̄^mb`.
    pub fn add_term(&mut self, alpha: &[u16], beta: &[u16], m: u16, mb: u16, c: CRational) -> Result<()> {
        if alpha.len() != self.n || beta.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: alpha.len().max(beta.len()) });
        }
        let mut e = alpha.to_vec();
        e.extend_from_slice(beta);
        e.extend([m, mb]);
        self.poly.add_term(e, c);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Restriction to the model quadric: `w ↦ u + iL`, `w̄ ↦ u − iL`.
    pub fn model_restrict(&self, sig: &Signature) -> Result<RealPoly> {
        if sig.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: sig.n() });
        }
        let n = self.n;
        let rw = real_weights(n);
        let l = sig.levi_poly().into_poly();
        let u = RealPoly::u(n).into_poly();
        let il = l.scale(&CRational::i());
        let mut images: Vec<Poly> = (0..2 * n).map(|i| Poly::var(rw.clone(), i)).collect();
        images.push(u.add(&il));
        images.push(u.sub(&il));
        let out = self.poly.substitute(&images, &rw, None::<&Truncation>);
        RealPoly::from_poly(n, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_im_w() {
        // Im w = (w - w̄)/2i restricts to L
        let sig = Signature::new(2, 1).unwrap();
        let mut p = ZwPoly::zero(2);
        let half_i = CRational::from_ratios(0, 1, -1, 2);
        p.add_term(&[0, 0], &[0, 0], 1, 0, half_i.clone()).unwrap();
        p.add_term(&[0, 0], &[0, 0], 0, 1, -half_i).unwrap();
        assert_eq!(p.model_restrict(&sig).unwrap(), sig.levi_poly());
    }
}
