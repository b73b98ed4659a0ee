use std::fmt;

use nalgebra::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{real_weights, CRational, Poly, Truncation};
use crate::error::{Error, Result};

/// One stored term `coeff · z^alpha · z̄^beta · u^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub alpha: Vec<u16>,
    pub beta: Vec<u16>,
    pub k: u16,
    pub coeff: CRational,
}

/// A real-valued polynomial in `z₁..zₙ, z̄₁..z̄ₙ, u`.
///
/// Reality means `coeff(α, β, k) = conj(coeff(β, α, k))`. It is checked by
/// the public constructors; arithmetic between real polynomials stays real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPoly {
    n: usize,
    poly: Poly,
}

impl RealPoly {
    pub fn zero(n: usize) -> Self {
        RealPoly { n, poly: Poly::zero(real_weights(n)) }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        RealPoly { n, poly: Poly::constant(real_weights(n), c.into()) }
    }

    /// Builds from terms and validates reality. Repeated keys are summed.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let mut poly = Poly::zero(real_weights(n));
        for t in terms {
            if t.alpha.len() != n || t.beta.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: t.alpha.len().max(t.beta.len()) });
            }
            let mut e = t.alpha.clone();
            e.extend_from_slice(&t.beta);
            e.push(t.k);
            poly.add_term(e, t.coeff);
        }
        Self::from_poly(n, poly)
    }

    /// Wraps a raw polynomial over the `(z, z̄, u)` layout after checking
    /// reality.
    pub fn from_poly(n: usize, poly: Poly) -> Result<Self> {
        let out = RealPoly { n, poly };
        if let Some(key) = out.first_reality_violation() {
            return Err(Error::NotReal { key });
        }
        Ok(out)
    }

    pub(crate) fn from_poly_unchecked(n: usize, poly: Poly) -> Self {
        debug_assert!(RealPoly { n, poly: poly.clone() }.first_reality_violation().is_none());
        RealPoly { n, poly }
    }

    /// `Re(P)` of an arbitrary complex polynomial over the same layout.
    pub fn real_part_of(n: usize, p: &Poly) -> Self {
        let c = conj_raw(n, p);
        let half = CRational::real(BigRational::new(1.into(), 2.into()));
        RealPoly { n, poly: p.add(&c).scale(&half) }
    }

    /// `Im(P) = (P − P̄)/2i`.
    pub fn imag_part_of(n: usize, p: &Poly) -> Self {
        let c = conj_raw(n, p);
        // 1/(2i) = -i/2
        let k = CRational::from_ratios(0, 1, -1, 2);
        RealPoly { n, poly: p.sub(&c).scale(&k) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn key(&self, alpha: &[u16], beta: &[u16], k: u16) -> Vec<u16> {
        let mut e = alpha.to_vec();
        e.extend_from_slice(beta);
        e.push(k);
        e
    }

    pub fn coeff(&self, alpha: &[u16], beta: &[u16], k: u16) -> CRational {
        self.poly.coeff(&self.key(alpha, beta, k))
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        let n = self.n;
        self.poly.terms().iter().map(move |(e, c)| Term {
            alpha: e[..n].to_vec(),
            beta: e[n..2 * n].to_vec(),
            k: e[2 * n],
            coeff: c.clone(),
        })
    }

    /// Splits an exponent key into `(|α|, |β|, k)`.
    pub fn bidegree_of(&self, e: &[u16]) -> (u32, u32, u32) {
        let n = self.n;
        let p = e[..n].iter().map(|&x| x as u32).sum();
        let q = e[n..2 * n].iter().map(|&x| x as u32).sum();
        (p, q, e[2 * n] as u32)
    }

    fn first_reality_violation(&self) -> Option<String> {
        let n = self.n;
        for (e, c) in self.poly.terms() {
            let mirror = mirror_key(n, e);
            let m = self.poly.coeff(&mirror);
            if m != c.conj() {
                return Some(format_key(n, e));
            }
        }
        None
    }

    pub fn is_real(&self) -> bool {
        self.first_reality_violation().is_none()
    }

    pub fn add(&self, o: &RealPoly) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &RealPoly) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.sub(&o.poly) }
    }

    pub fn neg(&self) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.neg() }
    }

    pub fn mul(&self, o: &RealPoly) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.mul(&o.poly, None) }
    }

    pub fn mul_trunc(&self, o: &RealPoly, t: &Truncation) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.mul(&o.poly, Some(t)) }
    }

    pub fn scale(&self, k: &BigRational) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.scale(&CRational::real(k.clone())) }
    }

    pub fn truncate(&self, t: &Truncation) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.truncate(t) }
    }

    /// Terms with `|α| + |β| + 2k = d`.
    pub fn weighted_component(&self, d: u32) -> RealPoly {
        let p = self.poly.filter(|e| self.poly.weight_of(e) == d);
        RealPoly { n: self.n, poly: p }
    }

    /// Terms with `|α| = p`, `|β| = q` and `u`-exponent `k`. Real whenever
    /// `p = q`; otherwise the result is a raw polynomial half.
    pub fn bidegree_component(&self, p: u32, q: u32, k: u32) -> Poly {
        self.poly.filter(|e| self.bidegree_of(e) == (p, q, k))
    }

    /// Terms with ordinary degree `|α| + |β| + k ≤ d`.
    pub fn low_degree_part(&self, d: u32) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.filter(|e| Poly::degree_of(e) <= d) }
    }

    pub fn filter(&self, keep: impl Fn(&[u16]) -> bool) -> RealPoly {
        RealPoly { n: self.n, poly: self.poly.filter(keep) }
    }

    /// True when no term depends on `u`.
    pub fn is_u_free(&self) -> bool {
        self.poly.terms().keys().all(|e| e[2 * self.n] == 0)
    }

    /// Evaluates at `(z, z̄, u)` in floating point.
    pub fn eval_f64(&self, z: &[Complex<f64>], u: f64) -> Complex<f64> {
        eval_raw_f64(self.n, &self.poly, z, u)
    }

    /// Exact evaluation at a complex point (with `z̄` the conjugate of `z`).
    pub fn eval_exact(&self, z: &[CRational], u: &BigRational) -> CRational {
        let n = self.n;
        let mut acc = CRational::zero();
        for (e, c) in self.poly.terms() {
            let mut m = c.clone();
            for j in 0..n {
                m = &m * &z[j].pow(e[j] as u32);
                m = &m * &z[j].conj().pow(e[n + j] as u32);
            }
            let mut up = BigRational::one();
            for _ in 0..e[2 * n] {
                up *= u;
            }
            acc += &m.scale(&up);
        }
        acc
    }
}

pub(crate) fn mirror_key(n: usize, e: &[u16]) -> Vec<u16> {
    let mut m = Vec::with_capacity(e.len());
    m.extend_from_slice(&e[n..2 * n]);
    m.extend_from_slice(&e[..n]);
    m.extend_from_slice(&e[2 * n..]);
    m
}

/// Complex conjugate of a polynomial over `(z, z̄, u)`.
pub(crate) fn conj_raw(n: usize, p: &Poly) -> Poly {
    let mut out = Poly::zero(p.weights().clone());
    for (e, c) in p.terms() {
        out.add_term(mirror_key(n, e), c.conj());
    }
    out
}

pub(crate) fn eval_raw_f64(n: usize, p: &Poly, z: &[Complex<f64>], u: f64) -> Complex<f64> {
    let mut acc = Complex::new(0.0, 0.0);
    for (e, c) in p.terms() {
        let (re, im) = c.to_f64_pair();
        let mut m = Complex::new(re, im);
        for j in 0..n {
            m *= z[j].powu(e[j] as u32) * z[j].conj().powu(e[n + j] as u32);
        }
        m *= u.powi(e[2 * n] as i32);
        acc += m;
    }
    acc
}

pub(crate) fn format_key(n: usize, e: &[u16]) -> String {
    format!("alpha={:?} beta={:?} k={}", &e[..n], &e[n..2 * n], e[2 * n])
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.n;
        let mut first = true;
        for (e, c) in self.poly.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for j in 0..n {
                if e[j] > 0 {
                    write!(f, "·z{}^{}", j + 1, e[j])?;
                }
            }
            for j in 0..n {
                if e[n + j] > 0 {
                    write!(f, "·zb{}^{}", j + 1, e[n + j])?;
                }
            }
            if e[2 * n] > 0 {
                write!(f, "·u^{}", e[2 * n])?;
            }
        }
        Ok(())
    }
}

/// Builders for the polynomials that appear over and over.
impl RealPoly {
    /// `z_j`-monomial helper: `c · z^α z̄^β u^k` added to `self` together with
    /// its conjugate mirror (once, if the key is self-mirrored).
    pub fn add_real_pair(&mut self, alpha: &[u16], beta: &[u16], k: u16, c: &CRational) {
        let key = self.key(alpha, beta, k);
        let mirror = mirror_key(self.n, &key);
        if key == mirror {
            self.poly.add_term(key, CRational::real(c.re.clone()));
        } else {
            self.poly.add_term(key, c.clone());
            self.poly.add_term(mirror, c.conj());
        }
    }

    /// `|z_j|²`
    pub fn abs_sq(n: usize, j: usize) -> RealPoly {
        let mut a = vec![0; n];
        a[j] = 1;
        let mut p = RealPoly::zero(n);
        p.add_real_pair(&a, &a, 0, &CRational::one());
        p
    }

    /// `u`
    pub fn u(n: usize) -> RealPoly {
        let mut p = Poly::zero(real_weights(n));
        let mut e = vec![0; 2 * n + 1];
        e[2 * n] = 1;
        p.add_term(e, CRational::one());
        RealPoly { n, poly: p }
    }

    pub fn is_zero_below_weight(&self, d: u32) -> bool {
        self.poly.terms().keys().all(|e| self.poly.weight_of(e) > d)
    }

    pub fn zero_poly(&self) -> bool {
        self.poly.terms().values().all(|c| c.is_zero())
    }

    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.poly
            .terms()
            .values()
            .map(|c| {
                let (a, b) = c.to_f64_pair();
                a.hypot(b)
            })
            .fold(0.0, f64::max)
    }

    pub fn has_constant(&self) -> bool {
        !self.poly.coeff(&vec![0; 2 * self.n + 1]).is_zero()
    }

    pub fn constant_term(&self) -> BigRational {
        let c = self.poly.coeff(&vec![0; 2 * self.n + 1]);
        if c.is_zero() {
            BigRational::zero()
        } else {
            c.re
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reality_is_enforced() {
        let t = Term { alpha: vec![2, 0], beta: vec![0, 1], k: 0, coeff: CRational::one() };
        let err = RealPoly::from_terms(2, [t.clone()]).unwrap_err();
        assert!(matches!(err, Error::NotReal { .. }));
        let mirror = Term { alpha: vec![0, 1], beta: vec![2, 0], k: 0, coeff: CRational::one() };
        assert!(RealPoly::from_terms(2, [t, mirror]).is_ok());
    }

    #[test]
    fn weighted_grading() {
        // |z1|² + u²: weight-2 part is |z1|²
        let p = RealPoly::abs_sq(1, 0).add(&RealPoly::u(1).mul(&RealPoly::u(1)));
        assert_eq!(p.weighted_component(2), RealPoly::abs_sq(1, 0));
        assert_eq!(p.weighted_component(4), RealPoly::u(1).mul(&RealPoly::u(1)));
        assert!(p.weighted_component(3).is_zero());
    }

    #[test]
    fn im_part_of_holomorphic_times_conj() {
        // Im(z1² z̄2) u, bidegree (2,1,1) piece is (1/2i) z1² z̄2 u = -(i/2) z1² z̄2 u
        let n = 2;
        let mut raw = Poly::zero(real_weights(n));
        raw.add_term(vec![2, 0, 0, 1, 1], CRational::one());
        let p = RealPoly::imag_part_of(n, &raw);
        let piece = p.bidegree_component(2, 1, 1);
        assert_eq!(piece.len(), 1);
        assert_eq!(piece.coeff(&[2, 0, 0, 1, 1]), CRational::from_ratios(0, 1, -1, 2));
    }
}
