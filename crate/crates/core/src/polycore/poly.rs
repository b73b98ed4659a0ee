//! Sparse multivariate polynomials over [`CRational`] with per-variable
//! weights.
//!
//! This is the arithmetic engine behind [`RealPoly`](super::RealPoly),
//! [`HoloPoly`](super::HoloPoly) and [`ZwPoly`](super::ZwPoly). Terms are kept
//! in a `BTreeMap` keyed by exponent vectors, so iteration order is
//! lexicographic and deterministic.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::CRational;

pub type Exponents = Vec<u16>;

/// Which terms survive a truncated product.
///
/// A monomial is kept when its weighted degree is at most `max_weight`, or
/// when its ordinary degree is at most `max_degree`. The discarded set is
/// closed under multiplication by any monomial, so truncating intermediate
/// products never changes a kept coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub max_weight: u32,
    pub max_degree: Option<u32>,
}

impl Truncation {
    pub fn weighted(max_weight: u32) -> Self {
        Truncation { max_weight, max_degree: None }
    }

    /// Everything of weighted degree ≤ 4 together with everything of
    /// ordinary degree ≤ 4: exactly what the fourth-order normal form and
    /// its two residual conditions can see.
    pub fn normal_form() -> Self {
        Truncation { max_weight: 4, max_degree: Some(4) }
    }

    #[inline]
    pub fn keeps(&self, weight: u32, degree: u32) -> bool {
        weight <= self.max_weight || self.max_degree.is_some_and(|d| degree <= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    weights: Arc<[u32]>,
    terms: BTreeMap<Exponents, CRational>,
}

impl Poly {
    pub fn zero(weights: Arc<[u32]>) -> Self {
        Poly { weights, terms: BTreeMap::new() }
    }

    pub fn constant(weights: Arc<[u32]>, c: CRational) -> Self {
        let n = weights.len();
        let mut p = Poly::zero(weights);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(weights: Arc<[u32]>, i: usize) -> Self {
        let mut e = vec![0; weights.len()];
        e[i] = 1;
        let mut p = Poly::zero(weights);
        p.add_term(e, CRational::one());
        p
    }

    pub fn weights(&self) -> &Arc<[u32]> {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, CRational> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u16]) -> CRational {
        self.terms.get(e).cloned().unwrap_or_else(CRational::zero)
    }

    pub fn weight_of(&self, e: &[u16]) -> u32 {
        e.iter().zip(self.weights.iter()).map(|(&x, &w)| x as u32 * w).sum()
    }

    pub fn degree_of(e: &[u16]) -> u32 {
        e.iter().map(|&x| x as u32).sum()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.weight_of(e)).max()
    }

    pub fn add_term(&mut self, e: Exponents, c: CRational) {
        debug_assert_eq!(e.len(), self.nvars());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, k: &CRational) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.weights.clone());
        }
        self.map_coeffs(|c| c * k)
    }

    pub fn map_coeffs(&self, f: impl Fn(&CRational) -> CRational) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let v = f(c);
                (!v.is_zero()).then(|| (e.clone(), v))
            })
            .collect();
        Poly { weights: self.weights.clone(), terms }
    }

    pub fn filter(&self, keep: impl Fn(&[u16]) -> bool) -> Poly {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        Poly { weights: self.weights.clone(), terms }
    }

    pub fn truncate(&self, t: &Truncation) -> Poly {
        self.filter(|e| t.keeps(self.weight_of(e), Self::degree_of(e)))
    }

    pub fn mul(&self, other: &Poly, trunc: Option<&Truncation>) -> Poly {
        let mut out = Poly::zero(self.weights.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let rhs: Vec<(&Exponents, u32, u32, &CRational)> = other
            .terms
            .iter()
            .map(|(e, c)| (e, other.weight_of(e), Self::degree_of(e), c))
            .collect();
        for (ea, ca) in &self.terms {
            let wa = self.weight_of(ea);
            let da = Self::degree_of(ea);
            for &(eb, wb, db, cb) in &rhs {
                if let Some(t) = trunc {
                    if !t.keeps(wa + wb, da + db) {
                        continue;
                    }
                }
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32, trunc: Option<&Truncation>) -> Poly {
        let mut acc = Poly::constant(self.weights.clone(), CRational::one());
        for _ in 0..k {
            acc = acc.mul(self, trunc);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.weights.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.scale(&num_rational::BigRational::from_integer(e[i].into())));
        }
        out
    }

    /// Re-indexes variables: variable `i` of `self` becomes variable
    /// `map[i]` of the result, which lives over `weights`.
    pub fn relabel(&self, weights: Arc<[u32]>, map: &[usize]) -> Poly {
        let n = weights.len();
        let mut out = Poly::zero(weights);
        for (e, c) in &self.terms {
            let mut f = vec![0u16; n];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Composition: substitutes `images[i]` for variable `i`. All images
    /// must share one variable layout, given by `out_weights`.
    pub fn substitute(&self, images: &[Poly], out_weights: &Arc<[u32]>, trunc: Option<&Truncation>) -> Poly {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        if self.is_zero() {
            return Poly::zero(out_weights.clone());
        }
        let mut max_e = vec![0u16; self.nvars()];
        for e in self.terms.keys() {
            for (m, &x) in max_e.iter_mut().zip(e.iter()) {
                *m = (*m).max(x);
            }
        }
        let powers: Vec<Vec<Poly>> = images
            .iter()
            .zip(&max_e)
            .map(|(img, &m)| {
                let mut v = vec![Poly::constant(out_weights.clone(), CRational::one())];
                for k in 1..=m as usize {
                    let next = v[k - 1].mul(img, trunc);
                    v.push(next);
                }
                v
            })
            .collect();
        let terms: Vec<(&Exponents, &CRational)> = self.terms.iter().collect();
        subst_rec(&terms, 0, &powers, out_weights, trunc)
    }
}

fn subst_rec(
    terms: &[(&Exponents, &CRational)],
    var: usize,
    powers: &[Vec<Poly>],
    out_weights: &Arc<[u32]>,
    trunc: Option<&Truncation>,
) -> Poly {
    if var == powers.len() {
        let mut c = CRational::zero();
        for (_, t) in terms {
            c += t;
        }
        return Poly::constant(out_weights.clone(), c);
    }
    let mut out = Poly::zero(out_weights.clone());
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[var];
        let mut end = start + 1;
        while end < terms.len() && terms[end].0[var] == e {
            end += 1;
        }
        let inner = subst_rec(&terms[start..end], var + 1, powers, out_weights, trunc);
        if e == 0 {
            out.add_assign(&inner);
        } else {
            out.add_assign(&powers[var][e as usize].mul(&inner, trunc));
        }
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Arc<[u32]> {
        Arc::from(v)
    }

    #[test]
    fn truncated_product_drops_only_high_terms() {
        let ws = w(&[1, 2]);
        let x = Poly::var(ws.clone(), 0);
        let y = Poly::var(ws.clone(), 1);
        let s = x.add(&y);
        let t = Truncation::weighted(3);
        let sq = s.mul(&s, Some(&t));
        // x² (wt 2) and 2xy (wt 3) survive, y² (wt 4) does not
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.coeff(&[1, 1]), CRational::from_int(2));
    }

    #[test]
    fn substitution_matches_expansion() {
        let ws = w(&[1, 1]);
        let x = Poly::var(ws.clone(), 0);
        let y = Poly::var(ws.clone(), 1);
        // p = x²y + 3
        let mut p = Poly::zero(ws.clone());
        p.add_term(vec![2, 1], CRational::one());
        p.add_term(vec![0, 0], CRational::from_int(3));
        // x -> x + y, y -> x - y
        let img = [x.add(&y), x.sub(&y)];
        let got = p.substitute(&img, &ws, None);
        let direct = img[0].mul(&img[0], None).mul(&img[1], None).add(&Poly::constant(ws.clone(), CRational::from_int(3)));
        assert_eq!(got, direct);
    }

    #[test]
    fn derivative_of_monomial() {
        let ws = w(&[1, 1]);
        let mut p = Poly::zero(ws);
        p.add_term(vec![3, 1], CRational::from_int(2));
        let d = p.derivative(0);
        assert_eq!(d.coeff(&[2, 1]), CRational::from_int(6));
    }
}
